#include "ht/io.hpp"

#include <fstream>
#include <sstream>

namespace ht {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) {
            auto x = m(r, c).quadruple();
            row.push_back(json::array({x[0], x[1], x[2], x[3]}));
        }
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("matrix: expected array of rows");
    const int rows = static_cast<int>(j.size());
    int cols = -1;
    Matrix m;
    for (int r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array()) throw ParseError("matrix: expected row array");
        if (cols < 0) {
            cols = static_cast<int>(row.size());
            m = Matrix(rows, cols);
        } else if (static_cast<int>(row.size()) != cols) {
            throw ParseError("matrix: ragged rows");
        }
        for (int c = 0; c < cols; ++c) {
            const json& q = row[c];
            if (!q.is_array() || q.size() != 4 || !q[0].is_number() ||
                !q[1].is_number() || !q[2].is_number() || !q[3].is_number())
                throw ParseError("matrix: entry must be a quadruple [x0,x1,x2,x3]");
            m(r, c) = Scalar::from_quadruple(
                {q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                 q[3].get<double>()});
        }
    }
    if (rows == 0) return Matrix(0, 0);
    return m;
}

NodeDocument parse_node_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("node document: ") + e.what());
    }
    NodeDocument doc;
    try {
        if (!j.contains("t") || !j["t"].is_number())
            throw ParseError("node document: missing numeric \"t\"");
        doc.t = j["t"].get<double>();
        if (doc.t == 0.0) throw ParseError("node document: t must be nonzero");
        for (const char* key : {"a", "b", "c", "d"})
            if (!j.contains(key))
                throw ParseError(std::string("node document: missing \"") + key + "\"");
        doc.A = matrix_from_json(j["a"]);
        doc.B = matrix_from_json(j["b"]);
        doc.C = matrix_from_json(j["c"]);
        doc.D = matrix_from_json(j["d"]);
        if (j.contains("j")) doc.J = matrix_from_json(j["j"]);
        if (j.contains("h")) doc.H = matrix_from_json(j["h"]);
        if (j.contains("metadata")) doc.metadata = j["metadata"];
    } catch (const json::exception& e) {
        throw ParseError(std::string("node document: ") + e.what());
    }
    try {
        doc.to_node();
    } catch (const SizeMismatch& e) {
        throw ParseError(std::string("node document: inconsistent sizes: ") + e.what());
    }
    return doc;
}

std::string serialize_node_document(const NodeDocument& doc) {
    json j;
    j["t"] = doc.t;
    j["a"] = matrix_to_json(doc.A);
    j["b"] = matrix_to_json(doc.B);
    j["c"] = matrix_to_json(doc.C);
    j["d"] = matrix_to_json(doc.D);
    if (doc.J) j["j"] = matrix_to_json(*doc.J);
    if (doc.H) j["h"] = matrix_to_json(*doc.H);
    if (!doc.metadata.is_null()) j["metadata"] = doc.metadata;
    return j.dump(2) + "\n";
}

NodeDocument load_node_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_node_document(ss.str());
}

void save_node_document(const NodeDocument& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << serialize_node_document(doc);
}

} // namespace ht
