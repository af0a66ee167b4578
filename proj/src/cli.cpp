#include "homcw/cli.hpp"

#include "homcw/cwexpr.hpp"
#include "homcw/dp_solver.hpp"
#include "homcw/error.hpp"
#include "homcw/graph.hpp"
#include "homcw/hardness_gen.hpp"
#include "homcw/hom_oracle.hpp"
#include "homcw/signatures.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace homcw {

namespace {

using nlohmann::json;

const char* yes_no(bool b) { return b ? "yes" : "no"; }

json mapping_json(const std::vector<std::string>& from_ids, const Graph& h, const Mapping& m) {
    json j = json::object();
    for (std::size_t v = 0; v < m.size(); ++v)
        if (m[v] >= 0) j[from_ids[v]] = h.vertex_id(m[v]);
    return j;
}

json graph_json(const Graph& g) {
    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back({g.vertex_id(u), g.vertex_id(v)});
    return {{"name", g.name()}, {"vertices", g.vertex_ids()}, {"edges", edges}, {"loops", g.loops_allowed()}};
}

json set_json(const Graph& h, VertexSet s) {
    json j = json::array();
    for (int v : set_members(s)) j.push_back(h.vertex_id(v));
    return j;
}

int h1_vertex(const Graph& h1, const std::string& id) {
    auto v = h1.find_vertex(id);
    if (!v) throw Error("'" + id + "' is not a vertex of the first factor '" + h1.name() + "'");
    return *v;
}

std::vector<VertexPair> parse_pairs(const Graph& h1, const std::string& text) {
    std::vector<VertexPair> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error("pair '" + item + "' is not of the form x:y");
        out.emplace_back(h1_vertex(h1, item.substr(0, colon)), h1_vertex(h1, item.substr(colon + 1)));
    }
    if (out.empty()) throw Error("empty relation");
    return out;
}

struct Common {
    bool json_out = false;
    std::uint64_t seed = 0;
    int threads = 1;
};

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// --- solve ---------------------------------------------------------------

struct SolveArgs {
    std::string target, expr, map;
    bool factors = false;
    bool no_split = false;
    int witness_limit = 0;
};

int cmd_solve(const SolveArgs& a, const Common& c, std::ostream& out) {
    Graph h = read_graph_file(a.target);
    KExpression expr = read_kexpr_file(a.expr);
    SolveOptions so;
    so.split_components = !a.no_split;
    so.witness_limit = a.witness_limit;
    SolveReport r;
    if (a.factors) {
        if (!a.map.empty()) throw Error("--factors does not take a partial mapping");
        r = solve_via_factors(expr, h, so);
    } else if (!a.map.empty()) {
        r = solve(expr, h, read_partial_mapping_file(a.map), so);
    } else {
        r = solve(expr, h, so);
    }
    if (c.json_out) {
        json j = {{"answer", r.answer},           {"method", r.method},
                  {"width", r.width},             {"signature_number", r.signature_number},
                  {"peak_records", r.peak_records}, {"bound_ok", r.bound_ok},
                  {"components", r.components},   {"wall_time_ms", r.wall_time_ms},
                  {"notes", r.notes}};
        if (r.witness) j["witness"] = mapping_json(expr.vertex_ids(), h, *r.witness);
        emit(out, j);
    } else {
        out << yes_no(r.answer) << '\n';
        out << "method: " << r.method << '\n';
        out << "width: " << r.width << '\n';
        out << "s(H): " << r.signature_number << '\n';
        out << "peak records: " << r.peak_records << '\n';
        out << "bound ok: " << yes_no(r.bound_ok) << '\n';
        out << "components: " << r.components << '\n';
        out << "time ms: " << r.wall_time_ms << '\n';
        for (const auto& n : r.notes) out << "note: " << n << '\n';
        if (r.witness)
            for (std::size_t v = 0; v < r.witness->size(); ++v)
                out << "map " << expr.vertex_id(static_cast<int>(v)) << ' ' << h.vertex_id((*r.witness)[v]) << '\n';
    }
    return r.answer ? 0 : 1;
}

// --- signature -------------------------------------------------------------

int cmd_signature(const std::string& path, bool list, const Common& c, std::ostream& out) {
    Graph h = read_graph_file(path);
    auto fam = SignatureFamily::build(h);
    if (c.json_out) {
        json j = {{"graph", h.name()}, {"signature_number", fam.size()}};
        if (list) {
            json sets = json::array();
            for (std::size_t i = 0; i < fam.size(); ++i)
                sets.push_back({{"set", set_json(h, fam.set(i))}, {"witness", set_json(h, fam.witness(i))}});
            j["sets"] = sets;
        }
        emit(out, j);
    } else {
        out << "s(H) = " << fam.size() << '\n';
        if (list)
            for (std::size_t i = 0; i < fam.size(); ++i)
                out << format_set(h, fam.set(i)) << " witness " << format_set(h, fam.witness(i)) << '\n';
    }
    return 0;
}

// --- core ------------------------------------------------------------------

int cmd_core(const std::string& path, const std::string& output, const Common& c, std::ostream& out) {
    Graph h = read_graph_file(path);
    auto r = compute_core(h);
    if (!output.empty()) write_graph_file(r.core, output);
    if (c.json_out) {
        json verts = json::array();
        for (int v : r.core_vertices) verts.push_back(h.vertex_id(v));
        json retraction = json::object();
        for (int v = 0; v < h.order(); ++v)
            retraction[h.vertex_id(v)] = r.core.vertex_id(r.retraction[static_cast<std::size_t>(v)]);
        emit(out, {{"graph", h.name()},
                   {"core_order", r.core.order()},
                   {"core_vertices", verts},
                   {"retraction", retraction},
                   {"core", graph_json(r.core)}});
    } else {
        out << "core: " << r.core.order() << " vertices\n";
        if (output.empty()) out << serialize_graph(r.core);
    }
    return 0;
}

// --- factor ----------------------------------------------------------------

int cmd_factor(const std::string& path, const Common& c, std::ostream& out) {
    Graph h = read_graph_file(path);
    auto f = factorize_prime(h);
    if (c.json_out) {
        json factors = json::array();
        for (const auto& g : f.factors) factors.push_back(graph_json(g));
        json coords = json::object();
        for (int v = 0; v < h.order(); ++v) {
            json cs = json::array();
            for (std::size_t i = 0; i < f.factors.size(); ++i)
                cs.push_back(f.factors[i].vertex_id(f.coords[static_cast<std::size_t>(v)][i]));
            coords[h.vertex_id(v)] = cs;
        }
        emit(out, {{"graph", h.name()}, {"prime", f.is_prime()}, {"factors", factors}, {"coords", coords}});
    } else {
        out << "prime: " << yes_no(f.is_prime()) << '\n';
        for (std::size_t i = 0; i < f.factors.size(); ++i) {
            const auto& g = f.factors[i];
            out << "factor " << i + 1 << ": " << g.name() << ", " << g.order() << " vertices, " << g.edge_count()
                << " edges\n"
                << serialize_graph(g);
        }
    }
    return 0;
}

// --- projective ------------------------------------------------------------

struct ProjectiveArgs {
    std::string graph;
    int factor = 1;
    int ell = 2;
    std::size_t cap = 100000;
};

int cmd_projective(const ProjectiveArgs& a, const Common& c, std::ostream& out) {
    Graph h = read_graph_file(a.graph);
    auto f = factorize_prime(h);
    if (a.factor < 1 || a.factor > static_cast<int>(f.factors.size()))
        throw Error("--factor must lie in 1.." + std::to_string(f.factors.size()));
    auto r = check_projective(f, a.factor - 1, a.ell, a.cap);
    if (c.json_out) {
        json j = {{"projective", r.projective},       {"factor", a.factor},
                  {"ell", r.ell},                     {"product_order", r.product.order()},
                  {"extension_count", r.extension_count}, {"projection_count", r.projection_count},
                  {"truncated", r.truncated}};
        if (r.counterexample)
            j["counterexample"] = mapping_json(r.product.vertex_ids(), f.factors[static_cast<std::size_t>(a.factor - 1)],
                                               *r.counterexample);
        emit(out, j);
    } else {
        out << "projective for ell = " << r.ell << ": " << yes_no(r.projective) << '\n';
        out << "product vertices: " << r.product.order() << '\n';
        out << "extensions: " << r.extension_count << (r.truncated ? " (truncated)" : "") << '\n';
        out << "projections among them: " << r.projection_count << '\n';
    }
    return r.projective ? 0 : 1;
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
    std::string target, csp, outdir;
    int blocks = 0;
    bool to_hom = false;
};

json reduction_meta_json(const ReductionOutput& r) {
    const auto& m = r.meta;
    SplitTarget st(r.factors);
    json lambda = json::array();
    for (VertexSet s : m.lambda) lambda.push_back(set_json(st.h1, s));
    int prescribed = 0;
    for (int x : r.partial) prescribed += x >= 0;
    std::vector<std::string> factor_names;
    for (const auto& g : r.factors.factors) factor_names.push_back(g.name());
    const bool marker = m.empty_constraint;
    return {
        {"n", m.n},
        {"m", m.m},
        {"domain", m.domain},
        {"arity", m.arity},
        {"blocks", m.blocks},
        {"full_blocks", m.full_blocks},
        {"forward_only", m.forward_only},
        {"empty_constraint", m.empty_constraint},
        {"to_hom", m.to_hom},
        {"target", r.target.name()},
        {"factors", factor_names},
        {"a", st.h1.vertex_id(m.a)},
        {"b", st.h1.vertex_id(m.b)},
        {"c", st.h1.vertex_id(m.c)},
        {"w", marker ? json() : json(st.w.vertex_id(m.w))},
        {"w_prime", marker ? json() : json(st.w.vertex_id(m.w_prime))},
        {"lambda", lambda},
        {"labels",
         {{"main", m.main_labels},
          {"done", m.done_labels},
          {"constraint_work", m.constraint_work_labels},
          {"incidence_work", m.incidence_work_labels},
          {"hom", m.hom_labels},
          {"width", r.expr.width()}}},
        {"vertices", r.graph.order()},
        {"edges", r.graph.edge_count()},
        {"prescribed", m.to_hom ? 0 : prescribed},
        {"gadget_templates", r.templates.size()},
        {"placed_gadgets", r.gadgets.size()},
    };
}

int cmd_gen(const GenArgs& a, const Common& c, std::ostream& out) {
    Graph h = read_graph_file(a.target);
    CSPInstance csp = read_csp_file(a.csp);
    auto f = factorize_prime(h);
    ReductionOptions opt;
    if (a.blocks > 0) opt.blocks_override = a.blocks;
    opt.to_hom = a.to_hom;
    auto r = reduce_csp(csp, f, opt);

    namespace fs = std::filesystem;
    fs::create_directories(a.outdir);
    const fs::path dir(a.outdir);
    write_graph_file(r.graph, (dir / "G.graph").string());
    write_kexpr_file(r.expr, (dir / "G.cwexpr").string());
    if (r.meta.to_hom) {
        std::ofstream((dir / "G.map").string()) << "# plain Hom instance: no prescribed vertices\n";
    } else {
        write_partial_mapping_file(to_partial_mapping(r.graph, r.target, r.partial), (dir / "G.map").string());
    }
    json meta = reduction_meta_json(r);
    std::ofstream((dir / "meta.json").string()) << meta.dump(2) << '\n';

    if (c.json_out) {
        emit(out, meta);
    } else {
        out << "wrote " << (dir / "G.graph").string() << ", G.map, G.cwexpr, meta.json\n";
        out << "vertices: " << r.graph.order() << ", edges: " << r.graph.edge_count() << '\n';
        out << "blocks: " << r.meta.blocks << " of " << r.meta.full_blocks << (r.meta.forward_only ? " (forward only)" : "")
            << '\n';
        out << "labels: " << r.expr.width() << '\n';
        if (r.meta.empty_constraint) out << "note: a constraint allows nothing; emitted the canonical no-instance\n";
    }
    return 0;
}

// --- oracle ----------------------------------------------------------------

struct OracleArgs {
    std::string target, graph, map;
    std::size_t enumerate = 0;
};

int cmd_oracle(const OracleArgs& a, const Common& c, std::ostream& out) {
    Graph h = read_graph_file(a.target);
    Graph g = read_graph_file(a.graph);
    Mapping pre = a.map.empty() ? Mapping(static_cast<std::size_t>(g.order()), -1)
                                : resolve_partial(g, h, read_partial_mapping_file(a.map));
    auto found = find_homomorphism(g, h, pre);
    json j = {{"answer", found.has_value()}};
    if (found) j["mapping"] = mapping_json(g.vertex_ids(), h, *found);
    std::optional<Extensions> ext;
    if (a.enumerate > 0) {
        ext = enumerate_extensions(g, h, pre, a.enumerate);
        j["count"] = ext->mappings.size();
        j["truncated"] = ext->truncated;
    }
    if (c.json_out) {
        emit(out, j);
    } else {
        out << yes_no(found.has_value()) << '\n';
        if (found)
            for (int v = 0; v < g.order(); ++v) out << "map " << g.vertex_id(v) << ' ' << h.vertex_id((*found)[static_cast<std::size_t>(v)]) << '\n';
        if (ext) out << "extensions: " << ext->mappings.size() << (ext->truncated ? " (truncated)" : "") << '\n';
    }
    return found ? 0 : 1;
}

// --- verify-gadget -----------------------------------------------------------

struct GadgetArgs {
    std::string target, kind = "implication", pairs, a, b, c, w, w_prime;
    int t = 2;
    std::size_t cap = 1'000'000;
};

int cmd_verify_gadget(const GadgetArgs& a, const Common& c, std::ostream& out) {
    Graph h = read_graph_file(a.target);
    auto f = factorize_prime(h);
    SplitTarget st(f);
    const Graph& h1 = st.h1;
    auto pick = [&](const std::string& id, int fallback) {
        if (!id.empty()) return h1_vertex(h1, id);
        if (fallback >= h1.order()) throw Error("first factor has fewer than 3 vertices");
        return fallback;
    };
    auto w_edges = st.w.edges();
    auto pick_w = [&](const std::string& id, bool second) {
        if (!id.empty()) {
            auto v = st.w.find_vertex(id);
            if (!v) throw Error("'" + id + "' is not a vertex of W");
            return *v;
        }
        if (w_edges.empty()) throw Error("W has no edge; pass --w and --w-prime");
        return second ? w_edges[0].second : w_edges[0].first;
    };
    const int w = pick_w(a.w, false), w2 = pick_w(a.w_prime, true);

    json j = {{"kind", a.kind}};
    bool ok = false;
    Graph built;
    if (a.kind == "or") {
        auto g = or_gadget(st, pick(a.a, 0), pick(a.b, 1), pick(a.c, 2), w, a.t);
        auto r = verify_or_gadget(st, g, a.cap);
        ok = r.o1 && r.o2;
        built = g.graph;
        j.update({{"t", a.t}, {"o1", r.o1}, {"o2", r.o2}, {"extensions", r.extensions}, {"truncated", r.truncated}});
    } else {
        GadgetInstance g;
        if (a.kind == "implication") {
            g = implication_gadget(st, pick(a.a, 0), pick(a.b, 1), w, w2);
        } else if (a.kind == "s") {
            if (a.pairs.empty()) throw Error("--kind s needs --pairs");
            g = s_gadget(st, parse_pairs(h1, a.pairs), w, w2);
        } else {
            throw Error("unknown gadget kind '" + a.kind + "' (s, implication, or)");
        }
        auto r = verify_s_gadget(st, g, a.cap);
        ok = r.s1 && r.s2;
        built = g.graph;
        json observed = json::array();
        for (auto [x, y] : r.observed) observed.push_back({h1.vertex_id(x), h1.vertex_id(y)});
        j.update({{"relation_size", g.pairs.size()},
                  {"s1", r.s1},
                  {"s2", r.s2},
                  {"extensions", r.extensions},
                  {"truncated", r.truncated},
                  {"observed", observed}});
    }
    j["vertices"] = built.order();
    j["edges"] = built.edge_count();
    j["holds"] = ok;
    if (c.json_out) {
        emit(out, j);
    } else {
        out << "kind: " << a.kind << '\n' << "vertices: " << built.order() << ", edges: " << built.edge_count() << '\n';
        if (a.kind == "or") {
            out << "O1: " << (j["o1"].get<bool>() ? "holds" : "fails") << '\n';
            out << "O2: " << (j["o2"].get<bool>() ? "holds" : "fails") << '\n';
        } else {
            out << "S1: " << (j["s1"].get<bool>() ? "holds" : "fails") << '\n';
            out << "S2: " << (j["s2"].get<bool>() ? "holds" : "fails") << '\n';
        }
        out << "extensions: " << j["extensions"].get<std::size_t>() << (j["truncated"].get<bool>() ? " (truncated)" : "")
            << '\n';
    }
    return ok ? 0 : 1;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
    std::string family = "complete";
    std::vector<int> sizes{3, 4};
    int min_width = 2, max_width = 6;
    int random = 0;
    int vertices = 12;
    double density = 0.3;
    std::string output;
};

Graph family_member(const std::string& family, int size) {
    if (family == "complete") return named::complete(size);
    if (family == "cycle") return named::cycle(size);
    if (family == "wheel") return named::wheel(size);
    throw Error("unknown target family '" + family + "' (complete, cycle, wheel)");
}

int cmd_bench(const BenchArgs& a, const Common& c, std::ostream& out) {
    if (a.min_width < 2 || a.max_width < a.min_width) throw Error("need 2 <= --min-width <= --max-width");
    json rows = json::array();
    std::ostringstream csv;
    csv << "family,target,expression,width,signature_number,peak_records,bound,time_ms\n";
    std::uint64_t stream = c.seed;
    for (int size : a.sizes) {
        Graph h = family_member(a.family, size);
        for (int w = a.min_width; w <= a.max_width; ++w) {
            std::vector<std::pair<std::string, KExpression>> exprs;
            exprs.emplace_back("star", star_expression(w - 1));
            for (int r = 0; r < a.random; ++r)
                exprs.emplace_back("random" + std::to_string(r), random_linear_expression(a.vertices, w, a.density, stream++));
            for (const auto& [kind, e] : exprs) {
                SolveOptions so;
                so.split_components = false;
                auto rep = solve(e, h, so);
                const double bound = std::pow(static_cast<double>(rep.signature_number), e.width());
                csv << a.family << ',' << h.name() << ',' << kind << ',' << e.width() << ',' << rep.signature_number << ','
                    << rep.peak_records << ',' << bound << ',' << rep.wall_time_ms << '\n';
                rows.push_back({{"family", a.family},
                                {"target", h.name()},
                                {"expression", kind},
                                {"width", e.width()},
                                {"signature_number", rep.signature_number},
                                {"peak_records", rep.peak_records},
                                {"bound", bound},
                                {"time_ms", rep.wall_time_ms}});
            }
        }
    }
    if (!a.output.empty()) std::ofstream(a.output) << csv.str();
    if (c.json_out) emit(out, rows);
    else out << csv.str();
    return 0;
}

} // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graph homomorphism tools parameterized by clique-width", "homcw"};
    app.fallthrough();
    app.require_subcommand(1);
    Common common;
    app.add_flag("--json", common.json_out, "Machine-readable output");
    app.add_option("--seed", common.seed, "Seed for randomized utilities")->capture_default_str();
    app.add_option("--threads", common.threads, "Worker cap (single-threaded commands ignore it)")
        ->check(CLI::PositiveNumber);

    auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", common.json_out, "Machine-readable output"); };

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Decide Hom / HomExt with the signature-set DP");
    solve_cmd->add_option("--target", solve_args.target, "Target graph file")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--expr", solve_args.expr, "Clique-width expression of G")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--map", solve_args.map, "Partial mapping file")->check(CLI::ExistingFile);
    solve_cmd->add_flag("--factors", solve_args.factors, "Reduce the target to its core and prime factors first");
    solve_cmd->add_flag("--no-split", solve_args.no_split, "Run one DP over the whole expression");
    solve_cmd->add_option("--witness-limit", solve_args.witness_limit, "Attach a witness when G has at most this many vertices");
    add_json(solve_cmd);

    std::string sig_path;
    bool sig_list = false;
    auto* sig_cmd = app.add_subcommand("signature", "Signature number and family of a target");
    sig_cmd->add_option("graph", sig_path, "Target graph file")->required()->check(CLI::ExistingFile);
    sig_cmd->add_flag("--list", sig_list, "List every signature set with its maximal witness");
    add_json(sig_cmd);

    std::string core_path, core_out;
    auto* core_cmd = app.add_subcommand("core", "Core of a graph");
    core_cmd->add_option("graph", core_path, "Graph file")->required()->check(CLI::ExistingFile);
    core_cmd->add_option("-o,--output", core_out, "Write the core to this file");
    add_json(core_cmd);

    std::string factor_path;
    auto* factor_cmd = app.add_subcommand("factor", "Prime factorization under the direct product");
    factor_cmd->add_option("graph", factor_path, "Graph file")->required()->check(CLI::ExistingFile);
    add_json(factor_cmd);

    ProjectiveArgs proj_args;
    auto* proj_cmd = app.add_subcommand("projective", "Bounded projectivity check of one prime factor");
    proj_cmd->add_option("graph", proj_args.graph, "Graph file")->required()->check(CLI::ExistingFile);
    proj_cmd->add_option("--factor", proj_args.factor, "Factor index, from 1")->capture_default_str();
    proj_cmd->add_option("--ell", proj_args.ell, "Power of the factor")->capture_default_str();
    proj_cmd->add_option("--cap", proj_args.cap, "Stop after this many extensions")->capture_default_str();
    add_json(proj_cmd);

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Reduce a CSP instance to a HomExt(H) instance");
    gen_cmd->add_option("--target", gen_args.target, "Target graph file")->required()->check(CLI::ExistingFile);
    gen_cmd->add_option("--csp", gen_args.csp, "CSP instance file")->required()->check(CLI::ExistingFile);
    gen_cmd->add_option("-o,--output", gen_args.outdir, "Output directory")->required();
    gen_cmd->add_option("--blocks", gen_args.blocks, "Override the number of blocks")->check(CLI::PositiveNumber);
    gen_cmd->add_flag("--to-hom", gen_args.to_hom, "Wrap into a plain Hom instance");
    add_json(gen_cmd);

    OracleArgs oracle_args;
    auto* oracle_cmd = app.add_subcommand("oracle", "Backtracking homomorphism search");
    oracle_cmd->add_option("--target", oracle_args.target, "Target graph file")->required()->check(CLI::ExistingFile);
    oracle_cmd->add_option("--graph", oracle_args.graph, "Input graph file")->required()->check(CLI::ExistingFile);
    oracle_cmd->add_option("--map", oracle_args.map, "Partial mapping file")->check(CLI::ExistingFile);
    oracle_cmd->add_option("--enumerate", oracle_args.enumerate, "Also count extensions, up to this cap");
    add_json(oracle_cmd);

    GadgetArgs gadget_args;
    auto* gadget_cmd = app.add_subcommand("verify-gadget", "Build a gadget and check its defining properties");
    gadget_cmd->add_option("--target", gadget_args.target, "Target graph file")->required()->check(CLI::ExistingFile);
    gadget_cmd->add_option("--kind", gadget_args.kind, "s, implication or or")->capture_default_str();
    gadget_cmd->add_option("--pairs", gadget_args.pairs, "Relation for --kind s, as x:y,x:y");
    gadget_cmd->add_option("--a", gadget_args.a, "First-factor vertex a");
    gadget_cmd->add_option("--b", gadget_args.b, "First-factor vertex b");
    gadget_cmd->add_option("--c", gadget_args.c, "First-factor vertex c");
    gadget_cmd->add_option("--t", gadget_args.t, "Or-gadget arity")->capture_default_str();
    gadget_cmd->add_option("--w", gadget_args.w, "W vertex w");
    gadget_cmd->add_option("--w-prime", gadget_args.w_prime, "W vertex w'");
    gadget_cmd->add_option("--cap", gadget_args.cap, "Enumeration cap")->capture_default_str();
    add_json(gadget_cmd);

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Peak DP table sizes over a target family");
    bench_cmd->add_option("--family", bench_args.family, "complete, cycle or wheel")->capture_default_str();
    bench_cmd->add_option("--sizes", bench_args.sizes, "Family parameters")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--min-width", bench_args.min_width)->capture_default_str();
    bench_cmd->add_option("--max-width", bench_args.max_width)->capture_default_str();
    bench_cmd->add_option("--random", bench_args.random, "Random expressions per width")->capture_default_str();
    bench_cmd->add_option("--vertices", bench_args.vertices, "Vertices of random expressions")->capture_default_str();
    bench_cmd->add_option("--density", bench_args.density, "Join probability of random expressions")->capture_default_str();
    bench_cmd->add_option("-o,--output", bench_args.output, "CSV file");
    add_json(bench_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve_args, common, out);
        if (*sig_cmd) return cmd_signature(sig_path, sig_list, common, out);
        if (*core_cmd) return cmd_core(core_path, core_out, common, out);
        if (*factor_cmd) return cmd_factor(factor_path, common, out);
        if (*proj_cmd) return cmd_projective(proj_args, common, out);
        if (*gen_cmd) return cmd_gen(gen_args, common, out);
        if (*oracle_cmd) return cmd_oracle(oracle_args, common, out);
        if (*gadget_cmd) return cmd_verify_gadget(gadget_args, common, out);
        if (*bench_cmd) return cmd_bench(bench_args, common, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

} // namespace homcw
