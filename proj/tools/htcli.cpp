// Command-line front end for the H_t rational-function library.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ht/constructors.hpp"
#include "ht/factorization.hpp"
#include "ht/io.hpp"
#include "ht/selftest.hpp"

using nlohmann::json;

namespace {

double base_tolerance() {
    if (const char* env = std::getenv("HT_TOL")) {
        try {
            const double v = std::stod(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
    return 1e-8;
}

ht::CertKind parse_kind(const std::string& s) {
    if (s == "line-junitary") return ht::CertKind::LineJUnitary;
    if (s == "circle-junitary") return ht::CertKind::CircleJUnitary;
    if (s == "line-antisym") return ht::CertKind::LineAntiSym;
    if (s == "circle-antisym") return ht::CertKind::CircleAntiSym;
    throw ht::ParseError("unknown kind: " + s +
                         " (expected line-junitary, circle-junitary, "
                         "line-antisym, circle-antisym)");
}

ht::Scalar parse_scalar(const std::string& s) {
    std::array<double, 4> x{};
    std::istringstream ss(s);
    std::string tok;
    for (int i = 0; i < 4; ++i) {
        if (!std::getline(ss, tok, ',')) throw ht::ParseError("scalar: expected x0,x1,x2,x3");
        try {
            x[static_cast<size_t>(i)] = std::stod(tok);
        } catch (...) {
            throw ht::ParseError("scalar: bad number " + tok);
        }
    }
    return ht::Scalar::from_quadruple(x);
}

void print_matrix(const ht::Matrix& m, bool as_json) {
    if (as_json) {
        std::cout << ht::matrix_to_json(m).dump() << "\n";
        return;
    }
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) std::cout << m(r, c) << " ";
        std::cout << "\n";
    }
}

std::optional<ht::Signature> doc_signature(const ht::NodeDocument& doc,
                                           const ht::Node& node) {
    ht::AlgebraContext ctx(doc.t);
    if (doc.J) return ht::Signature(*doc.J, ctx);
    return ht::Signature(ht::Matrix::identity(node.out_dim()), ctx);
}

// A document whose h was written for one kind cannot certify another.
void check_stored_kind(const ht::NodeDocument& doc, ht::CertKind kind) {
    if (!doc.H || !doc.metadata.is_object() || !doc.metadata.contains("kind"))
        return;
    const std::string stored = doc.metadata["kind"].get<std::string>();
    if (stored != ht::kind_name(kind))
        throw ht::KindMismatch("document certificate is " + stored +
                               ", requested " + ht::kind_name(kind));
}

std::vector<ht::Matrix> subspace_columns(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw ht::ParseError("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ht::ParseError(std::string("subspace: ") + e.what());
    }
    ht::Matrix m = ht::matrix_from_json(j.contains("columns") ? j["columns"] : j);
    if (m.rows() != n) throw ht::SizeMismatch("subspace: wrong row count");
    std::vector<ht::Matrix> cols;
    for (int c = 0; c < m.cols(); ++c) cols.push_back(m.block(0, c, n, 1));
    return cols;
}

void emit_node(const ht::Node& node, const std::optional<ht::Matrix>& H,
               const std::optional<ht::Matrix>& J, const std::string& out,
               const std::string& label,
               const std::optional<ht::CertKind>& kind = std::nullopt) {
    ht::NodeDocument doc;
    doc.t = node.ctx.t;
    doc.A = node.A;
    doc.B = node.B;
    doc.C = node.C;
    doc.D = node.D;
    doc.H = H;
    doc.J = J;
    if (!label.empty()) doc.metadata = json{{"label", label}};
    if (kind) doc.metadata["kind"] = ht::kind_name(*kind);
    if (out.empty())
        std::cout << ht::serialize_node_document(doc);
    else
        ht::save_node_document(doc, out);
}

int run(int argc, char** argv) {
    CLI::App app{"Matrix rational functions over the scaled quaternions H_t"};
    app.require_subcommand(1);
    bool as_json = false;
    double tol = base_tolerance();
    app.add_flag("--json", as_json, "machine-readable output");
    app.add_option("--tol", tol, "tolerance override (default HT_TOL or 1e-8)");

    std::string file, kind_str = "line-junitary", subspace_file, out1, out2;
    std::vector<double> xs;
    bool solve_h = false, from_eigenpair = false;

    auto* eval_cmd = app.add_subcommand("eval", "evaluate R(x) from a node document");
    eval_cmd->add_option("file", file)->required();
    eval_cmd->add_option("-x,--x", xs, "evaluation points");

    auto* verify_cmd = app.add_subcommand("verify", "verify a structured certificate");
    verify_cmd->add_option("file", file)->required();
    verify_cmd->add_option("--kind", kind_str)->required();
    verify_cmd->add_flag("--solve-h", solve_h, "solve for H first and print it");

    auto* solveh_cmd = app.add_subcommand("solve-h", "solve for the certificate H");
    solveh_cmd->add_option("file", file)->required();
    solveh_cmd->add_option("--kind", kind_str)->required();
    solveh_cmd->add_option("--out", out1, "write the document back with h");

    auto* factor_cmd = app.add_subcommand("factor", "J-unitary minimal factorization");
    factor_cmd->add_option("file", file)->required();
    factor_cmd->add_option("--kind", kind_str)->required();
    factor_cmd->add_option("--subspace", subspace_file, "file with subspace columns");
    factor_cmd->add_flag("--from-eigenpair", from_eigenpair,
                         "use the dominant eigenpair of A");
    factor_cmd->add_option("--out1", out1);
    factor_cmd->add_option("--out2", out2);

    auto* dec_cmd = app.add_subcommand("decompose", "additive decomposition");
    dec_cmd->add_option("file", file)->required();
    dec_cmd->add_option("--kind", kind_str)->required();
    dec_cmd->add_option("--subspace", subspace_file);
    dec_cmd->add_flag("--from-eigenpair", from_eigenpair);
    dec_cmd->add_option("--out1", out1);
    dec_cmd->add_option("--out2", out2);

    auto* min_cmd = app.add_subcommand("minimality", "observability / controllability");
    min_cmd->add_option("file", file)->required();

    auto* deg_cmd = app.add_subcommand("degree", "McMillan degree");
    deg_cmd->add_option("file", file)->required();

    auto* make_cmd = app.add_subcommand("make", "generate canonical examples");
    make_cmd->require_subcommand(1);
    double t = -1.0, brune_h = 1.0;
    std::string alpha_str = "2,0,0,0", beta_str = "1,0,0,0", gamma_str = "1,0,0,0";
    std::vector<std::string> alpha_list;
    auto add_common = [&](CLI::App* c) {
        c->add_option("--t", t, "algebra scale (t != 0)");
        c->add_option("--out", out1, "output file (default stdout)");
    };
    auto* mk_bl = make_cmd->add_subcommand("blaschke-line");
    mk_bl->add_option("--alpha", alpha_str);
    add_common(mk_bl);
    auto* mk_bc = make_cmd->add_subcommand("blaschke-circle");
    mk_bc->add_option("--alpha", alpha_str);
    add_common(mk_bc);
    auto* mk_bp = make_cmd->add_subcommand("blaschke-pair");
    mk_bp->add_option("--alpha", alpha_str);
    mk_bp->add_option("--beta", beta_str);
    add_common(mk_bp);
    auto* mk_br = make_cmd->add_subcommand("brune");
    mk_br->add_option("--alpha", alpha_str = "0,1,0,0");
    mk_br->add_option("--beta", beta_str);
    mk_br->add_option("--gamma", gamma_str);
    mk_br->add_option("--hval", brune_h);
    add_common(mk_br);
    auto* mk_th = make_cmd->add_subcommand("theta");
    mk_th->add_option("--alpha", alpha_list, "repeatable scalar quadruples");
    add_common(mk_th);
    auto* mk_pp = make_cmd->add_subcommand("phi-from-psi");
    mk_pp->add_option("file", file)->required();
    mk_pp->add_option("--kind", kind_str)->required();
    mk_pp->add_option("--out", out1);

    std::string filter;
    auto* self_cmd = app.add_subcommand("selftest", "acceptance criteria suite");
    self_cmd->add_option("--filter", filter, "run only criteria whose name matches");

    for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; })) {
        sc->fallthrough();
        for (CLI::App* nested :
             sc->get_subcommands([](const CLI::App*) { return true; }))
            nested->fallthrough();
    }
    CLI11_PARSE(app, argc, argv);

    if (eval_cmd->parsed()) {
        ht::NodeDocument doc = ht::load_node_document(file);
        ht::Node node = doc.to_node();
        if (xs.empty()) {
            for (double x : ht::regular_samples({&node})) xs.push_back(x);
        }
        json out = json::array();
        for (double x : xs) {
            try {
                ht::Matrix v = ht::eval(node, x);
                if (as_json)
                    out.push_back({{"x", x}, {"value", ht::matrix_to_json(v)}});
                else {
                    std::cout << "x = " << x << ":\n";
                    print_matrix(v, false);
                }
            } catch (const ht::PoleAt&) {
                if (as_json)
                    out.push_back({{"x", x}, {"pole", true}});
                else
                    std::cout << "x = " << x << ": pole\n";
            }
        }
        if (as_json) std::cout << out.dump(2) << "\n";
        return 0;
    }

    if (verify_cmd->parsed() || solveh_cmd->parsed()) {
        ht::NodeDocument doc = ht::load_node_document(file);
        ht::Node node = doc.to_node();
        ht::CertKind kind = parse_kind(kind_str);
        check_stored_kind(doc, kind);
        std::optional<ht::Signature> J;
        if (ht::is_junitary_kind(kind)) J = doc_signature(doc, node);
        ht::Certificate cert{ht::Matrix(), kind, {}};
        if (doc.H && !solve_h && verify_cmd->parsed())
            cert.H = *doc.H;
        else
            cert = ht::solve_certificate(node, J, kind, tol);
        if (solveh_cmd->parsed()) {
            if (as_json)
                std::cout << json{{"h", ht::matrix_to_json(cert.H)}}.dump(2) << "\n";
            else
                print_matrix(cert.H, false);
            if (!out1.empty()) {
                doc.H = cert.H;
                if (!doc.metadata.is_object()) doc.metadata = json::object();
                doc.metadata["kind"] = ht::kind_name(kind);
                ht::save_node_document(doc, out1);
            }
            return 0;
        }
        auto rep = ht::verify_certificate(node, J, cert,
                                          ht::default_samples(node, kind), tol);
        if (solve_h) print_matrix(cert.H, as_json);
        if (as_json) {
            json out = {{"ok", rep.ok}, {"max_residual", rep.max_residual}};
            out["residuals"] = json::array();
            for (const auto& [label, r] : rep.entries)
                out["residuals"].push_back({{"equation", label}, {"residual", r}});
            std::cout << out.dump(2) << "\n";
        } else {
            for (const auto& [label, r] : rep.entries)
                std::cout << label << ": " << r << "\n";
            std::cout << (rep.ok ? "VERIFIED" : "FAILED")
                      << " (max residual " << rep.max_residual << ")\n";
        }
        return rep.ok ? 0 : 1;
    }

    if (factor_cmd->parsed() || dec_cmd->parsed()) {
        ht::NodeDocument doc = ht::load_node_document(file);
        ht::Node node = doc.to_node();
        ht::AlgebraContext ctx(doc.t);
        ht::CertKind kind = parse_kind(kind_str);
        check_stored_kind(doc, kind);
        std::vector<ht::Matrix> basis;
        if (!subspace_file.empty())
            basis = subspace_columns(subspace_file, node.state_dim());
        else if (from_eigenpair)
            basis = {ht::eigenpair(node.A, ctx).f};
        else
            throw ht::PreconditionViolated("need --subspace or --from-eigenpair");
        ht::Certificate cert{ht::Matrix(), kind, {}};
        std::optional<ht::Signature> J;
        if (ht::is_junitary_kind(kind)) J = doc_signature(doc, node);
        if (doc.H)
            cert.H = *doc.H;
        else
            cert = ht::solve_certificate(node, J, kind, tol);
        if (factor_cmd->parsed()) {
            auto fp = ht::junitary_factor(node, *J, cert, basis, tol);
            emit_node(fp.R1, fp.cert1.H, J->J, out1, "factor-1", fp.cert1.kind);
            emit_node(fp.R2, fp.cert2.H, J->J, out2, "factor-2", fp.cert2.kind);
            std::cout << "degrees: " << ht::mcmillan_degree(fp.R1) << " + "
                      << ht::mcmillan_degree(fp.R2) << " = "
                      << ht::mcmillan_degree(node) << "\n";
        } else {
            auto sp = ht::additive_decomposition(node, cert, basis, tol);
            emit_node(sp.phi1, sp.cert1.H, std::nullopt, out1, "summand-1",
                      sp.cert1.kind);
            emit_node(sp.phi2, sp.cert2.H, std::nullopt, out2, "summand-2",
                      sp.cert2.kind);
            std::cout << "degrees: " << ht::mcmillan_degree(sp.phi1) << " + "
                      << ht::mcmillan_degree(sp.phi2) << " = "
                      << ht::mcmillan_degree(node) << "\n";
        }
        return 0;
    }

    if (min_cmd->parsed() || deg_cmd->parsed()) {
        ht::NodeDocument doc = ht::load_node_document(file);
        ht::Node node = doc.to_node();
        if (deg_cmd->parsed()) {
            const int d = ht::mcmillan_degree(node);
            if (as_json)
                std::cout << json{{"degree", d}}.dump() << "\n";
            else
                std::cout << d << "\n";
            return 0;
        }
        const bool obs = ht::is_observable(node), con = ht::is_controllable(node);
        if (as_json)
            std::cout << json{{"observable", obs},
                              {"controllable", con},
                              {"minimal", obs && con}}.dump() << "\n";
        else
            std::cout << "observable: " << (obs ? "yes" : "no")
                      << "\ncontrollable: " << (con ? "yes" : "no")
                      << "\nminimal: " << (obs && con ? "yes" : "no") << "\n";
        return 0;
    }

    if (make_cmd->parsed()) {
        ht::AlgebraContext ctx(t);
        if (mk_bl->parsed()) {
            auto r = ht::blaschke_line(parse_scalar(alpha_str), ctx);
            emit_node(r.node, r.cert.H, ht::Matrix::identity(1), out1, "blaschke-line", r.cert.kind);
        } else if (mk_bc->parsed()) {
            auto r = ht::blaschke_circle(parse_scalar(alpha_str), ctx);
            emit_node(r.node, r.cert.H, ht::Matrix::identity(1), out1, "blaschke-circle", r.cert.kind);
        } else if (mk_bp->parsed()) {
            auto r = ht::blaschke_line_pair(parse_scalar(alpha_str),
                                            parse_scalar(beta_str), ctx);
            emit_node(r.node, r.cert.H, r.J.J, out1, "blaschke-pair", r.cert.kind);
        } else if (mk_br->parsed()) {
            auto r = ht::brune_section(parse_scalar(alpha_str), parse_scalar(beta_str),
                                       parse_scalar(gamma_str), brune_h, ctx);
            emit_node(r.node, r.cert.H, r.J.J, out1, "brune", r.cert.kind);
        } else if (mk_th->parsed()) {
            std::vector<ht::Scalar> alphas;
            for (const auto& s : alpha_list) alphas.push_back(parse_scalar(s));
            if (alphas.empty()) throw ht::PreconditionViolated("theta: need --alpha");
            auto r = ht::theta_builder(alphas, ctx);
            emit_node(r.node, r.cert.H, ht::Matrix::identity(1), out1, "theta", r.cert.kind);
        } else if (mk_pp->parsed()) {
            ht::NodeDocument doc = ht::load_node_document(file);
            ht::Node phi = ht::make_phi_from_psi(doc.to_node(), parse_kind(kind_str));
            emit_node(phi, std::nullopt, std::nullopt, out1, "phi-from-psi");
        }
        return 0;
    }

    if (self_cmd->parsed()) {
        auto results = ht::run_selftest(filter);
        bool all = true;
        json out = json::array();
        for (const auto& r : results) {
            all = all && r.passed;
            if (as_json)
                out.push_back({{"name", r.name},
                               {"passed", r.passed},
                               {"detail", r.detail},
                               {"seconds", r.seconds}});
            else
                std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  ("
                          << r.detail << ", " << r.seconds << " s)\n";
        }
        if (as_json) std::cout << out.dump(2) << "\n";
        return all ? 0 : 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ht::Error& e) {
        std::cerr << "error: " << e.what() << " (code " << e.code() << ")\n";
        return e.code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
}
