#ifndef HT_IO_HPP
#define HT_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "ht/realization.hpp"

namespace ht {

// On-disk node description: scalar quadruples [x0,x1,x2,x3] in nested
// row-major arrays, lowercase keys.
struct NodeDocument {
    double t = -1.0;
    Matrix A, B, C, D;
    std::optional<Matrix> J, H;
    nlohmann::json metadata;

    Node to_node() const { return Node(A, B, C, D, AlgebraContext(t)); }
};

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

NodeDocument parse_node_document(const std::string& text);
std::string serialize_node_document(const NodeDocument& doc);

NodeDocument load_node_document(const std::string& path);
void save_node_document(const NodeDocument& doc, const std::string& path);

} // namespace ht

#endif // HT_IO_HPP
