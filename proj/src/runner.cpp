#include "gns/runner.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "gns/functionals.hpp"
#include "gns/manifold.hpp"
#include "gns/verify.hpp"

namespace gns {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int thread_cap() {
    if (const char* env = std::getenv("GNSLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Runs f(0..count-1) on a bounded pool; item order is restored by the caller
// through indexed slots, so results do not depend on the thread count.
template <class F>
void parallel_items(std::size_t count, F&& f) {
    const std::size_t threads =
        std::min<std::size_t>(static_cast<std::size_t>(thread_cap()), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string csv_cell(const json& v) {
    std::string s;
    if (v.is_number_float())
        s = fmt(v.get<double>());
    else if (v.is_number_integer())
        s = std::to_string(v.get<long long>());
    else if (v.is_boolean())
        s = v.get<bool>() ? "true" : "false";
    else if (v.is_null())
        s = "";
    else
        s = v.get<std::string>();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        quoted += '"';
        return quoted;
    }
    return s;
}

std::string to_csv(const Table& table) {
    std::ostringstream out;
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
        out << "\n";
    }
    return out.str();
}

std::string to_json_doc(const Table& table, const RunSpec& spec) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = spec.command;
    doc["resolution"] = spec.resolution;
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = row[c];
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

BumpShape parse_bump(const std::string& name) {
    if (name == "ring") return BumpShape::ring;
    if (name == "core") return BumpShape::core;
    throw SpecError("unknown bump shape '" + name + "' (expected ring or core)");
}

struct ItemContext {
    ParamSet p;
    QuadratureGrid g;
};

ItemContext make_context(const RunSpec::Item& item, int resolution) {
    ItemContext ctx{derive_params(item.n, item.t), {}};
    ctx.g = build_grid(ctx.p, resolution);
    return ctx;
}

std::vector<json> base_cells(const ParamSet& p, int resolution) {
    return {kSchemaVersion, p.n, p.t, p.m, resolution};
}

std::vector<json> error_row(const RunSpec::Item& item, int resolution, std::size_t width,
                            const std::string& what) {
    std::vector<json> row{kSchemaVersion, item.n, item.t, nullptr, resolution};
    while (row.size() + 1 < width) row.push_back(nullptr);
    row.push_back("error: " + what);
    return row;
}

const std::vector<std::string> kBaseColumns{"schema_version", "n", "t", "m", "resolution"};

std::vector<std::string> columns(std::initializer_list<const char*> extra) {
    std::vector<std::string> cols = kBaseColumns;
    for (const char* c : extra) cols.push_back(c);
    cols.push_back("status");
    return cols;
}

// ---- command handlers -------------------------------------------------

Table cmd_constants(const RunSpec& spec) {
    Table table;
    table.columns = columns({"two_star", "gamma", "mu", "sharp_gn_constant",
                             "sharp_sobolev_constant_sq", "deficit_link_constant", "omega_m",
                             "omega_n"});
    std::vector<std::vector<std::vector<json>>> slots(spec.params.size());
    parallel_items(spec.params.size(), [&](std::size_t i) {
        try {
            const ItemContext ctx = make_context(spec.params[i], spec.resolution);
            auto row = base_cells(ctx.p, spec.resolution);
            const double s = sharp_sobolev_constant(ctx.p, ctx.g);
            row.insert(row.end(),
                       {ctx.p.two_star, ctx.p.gamma, ctx.p.mu,
                        sharp_gn_constant(ctx.p, ctx.g), s * s, deficit_link_constant(ctx.p),
                        sphere_area(ctx.p.m), sphere_area(ctx.p.n), "ok"});
            slots[i].push_back(std::move(row));
        } catch (const std::exception& e) {
            slots[i].push_back(
                error_row(spec.params[i], spec.resolution, table.columns.size(), e.what()));
        }
    });
    for (auto& s : slots)
        for (auto& r : s) table.rows.push_back(std::move(r));
    return table;
}

struct ParamRecipe {
    RunSpec::Item item;
    RunSpec::Recipe recipe;
};

std::vector<ParamRecipe> cross(const RunSpec& spec) {
    std::vector<ParamRecipe> items;
    for (const auto& item : spec.params)
        for (const auto& recipe : spec.corpus) items.push_back({item, recipe});
    return items;
}

Table cmd_deficit(const RunSpec& spec) {
    Table table;
    table.columns = columns({"bump", "epsilon", "gn_deficit"});
    const auto items = cross(spec);
    std::vector<std::vector<std::vector<json>>> slots(items.size());
    parallel_items(items.size(), [&](std::size_t i) {
        const auto& [item, recipe] = items[i];
        try {
            const ItemContext ctx = make_context(item, spec.resolution);
            const RadialProfile v = gn_extremal(ctx.p, 1.0);
            const RadialProfile bump = bump_profile(ctx.p, parse_bump(recipe.bump));
            for (double eps : recipe.epsilons) {
                const RadialProfile u =
                    normalize_mass(combine(1.0, v, eps * recipe.amplitude, bump), ctx.p, ctx.g);
                auto row = base_cells(ctx.p, spec.resolution);
                row.insert(row.end(),
                           {recipe.bump, eps, gn_deficit(u, ctx.p, ctx.g), "ok"});
                slots[i].push_back(std::move(row));
            }
        } catch (const std::exception& e) {
            slots[i].push_back(error_row(item, spec.resolution, table.columns.size(), e.what()));
        }
    });
    for (auto& s : slots)
        for (auto& r : s) table.rows.push_back(std::move(r));
    return table;
}

Table cmd_identity(const RunSpec& spec, bool& all_pass) {
    Table table;
    table.columns = columns({"corpus_id", "gn_deficit", "sobolev_deficit",
                             "deficit_link_constant", "identity_residual", "tolerance", "pass"});
    std::vector<std::vector<std::vector<json>>> slots(spec.params.size());
    std::atomic<bool> ok{true};
    parallel_items(spec.params.size(), [&](std::size_t i) {
        try {
            const ItemContext ctx = make_context(spec.params[i], spec.resolution);
            for (const auto& recipe : spec.corpus) {
                const auto corpus =
                    perturbed_corpus(ctx.p, recipe.count, recipe.seed, recipe.amplitude);
                for (const auto& entry : corpus) {
                    const RadialProfile u = normalize_ratio(entry.u, ctx.p, ctx.g);
                    const DeficitReport rep = deficit_identity(u, ctx.p, ctx.g);
                    const double mass_term = std::pow(
                        lp_norm(u, 2.0 * ctx.p.t, ctx.p, ctx.g), 4.0 * ctx.p.t / ctx.p.two_star);
                    const double tol =
                        1e-6 * std::max({std::abs(rep.gn_deficit),
                                         std::abs(rep.sobolev_deficit) / rep.c1, mass_term});
                    const bool pass = rep.identity_residual <= tol;
                    if (!pass) ok = false;
                    auto row = base_cells(ctx.p, spec.resolution);
                    row.insert(row.end(),
                               {entry.id, rep.gn_deficit, rep.sobolev_deficit, rep.c1,
                                rep.identity_residual, tol, pass, "ok"});
                    slots[i].push_back(std::move(row));
                }
            }
        } catch (const std::exception& e) {
            ok = false;
            slots[i].push_back(
                error_row(spec.params[i], spec.resolution, table.columns.size(), e.what()));
        }
    });
    for (auto& s : slots)
        for (auto& r : s) table.rows.push_back(std::move(r));
    all_pass = ok;
    return table;
}

Table cmd_distance(const RunSpec& spec) {
    Table table;
    table.columns =
        columns({"bump", "epsilon", "h1_distance", "h1_z", "h1_s", "h1_converged", "lp_distance",
                 "lp_z", "lp_s", "lp_converged", "l1_distance", "l1_lambda", "l1_converged"});
    const auto items = cross(spec);
    std::vector<std::vector<std::vector<json>>> slots(items.size());
    parallel_items(items.size(), [&](std::size_t i) {
        const auto& [item, recipe] = items[i];
        try {
            const ItemContext ctx = make_context(item, spec.resolution);
            const RadialProfile v = gn_extremal(ctx.p, 1.0);
            const RadialProfile bump = bump_profile(ctx.p, parse_bump(recipe.bump));
            for (double eps : recipe.epsilons) {
                const RadialProfile u =
                    normalize_mass(combine(1.0, v, eps * recipe.amplitude, bump), ctx.p, ctx.g);
                const CylField phi = lift(u, ctx.p);
                const ManifoldFit h1 = h1_distance(phi, ctx.p, ctx.g);
                const ManifoldFit lp = lp_distance(phi, ctx.p, ctx.g);
                const ManifoldFit l1 = l1_gn_distance(u, ctx.p, ctx.g);
                auto row = base_cells(ctx.p, spec.resolution);
                row.insert(row.end(), {recipe.bump, eps, h1.distance, h1.z_opt, h1.s_opt,
                                       h1.converged, lp.distance, lp.z_opt, lp.s_opt,
                                       lp.converged, l1.distance, l1.lambda_opt, l1.converged,
                                       "ok"});
                slots[i].push_back(std::move(row));
            }
        } catch (const std::exception& e) {
            slots[i].push_back(error_row(item, spec.resolution, table.columns.size(), e.what()));
        }
    });
    for (auto& s : slots)
        for (auto& r : s) table.rows.push_back(std::move(r));
    return table;
}

Table cmd_probe(const RunSpec& spec) {
    Table table;
    table.columns = columns({"bump", "epsilon", "deficit", "l1_distance", "h1_distance", "slope",
                             "residual", "observed_bound_constant"});
    const auto items = cross(spec);
    std::vector<std::vector<std::vector<json>>> slots(items.size());
    parallel_items(items.size(), [&](std::size_t i) {
        const auto& [item, recipe] = items[i];
        try {
            const ItemContext ctx = make_context(item, spec.resolution);
            const BumpShape shape = parse_bump(recipe.bump);
            const ProbeResult probe = stability_probe(ctx.p, shape, recipe.epsilons, ctx.g);
            const RadialProfile v = gn_extremal(ctx.p, 1.0);
            const RadialProfile bump = bump_profile(ctx.p, shape);
            for (std::size_t k = 0; k < probe.epsilons.size(); ++k) {
                const RadialProfile u = normalize_mass(
                    combine(1.0, v, probe.epsilons[k], bump), ctx.p, ctx.g);
                const double h1 = h1_distance(lift(u, ctx.p), ctx.p, ctx.g).distance;
                auto row = base_cells(ctx.p, spec.resolution);
                row.insert(row.end(),
                           {recipe.bump, probe.epsilons[k], probe.deficits[k],
                            probe.l1_distances[k], h1, probe.fitted_slope, probe.fit_residual,
                            probe.observed_bound_constant,
                            probe.noise_floor ? "noise-floor" : "ok"});
                slots[i].push_back(std::move(row));
            }
        } catch (const std::exception& e) {
            slots[i].push_back(error_row(item, spec.resolution, table.columns.size(), e.what()));
        }
    });
    for (auto& s : slots)
        for (auto& r : s) table.rows.push_back(std::move(r));
    return table;
}

Table cmd_lemmas(const RunSpec& spec) {
    Table table;
    table.columns = columns({"check", "input_id", "hypothesis_ok", "lhs", "rhs", "margin"});
    std::vector<std::vector<std::vector<json>>> slots(spec.params.size());
    parallel_items(spec.params.size(), [&](std::size_t i) {
        try {
            const ItemContext ctx = make_context(spec.params[i], spec.resolution);
            const RunSpec::Recipe recipe = spec.corpus.front();

            auto push = [&](const char* check, const BoundCheckRecord& rec) {
                auto row = base_cells(ctx.p, spec.resolution);
                row.insert(row.end(), {check, rec.input_id, rec.hypothesis_ok, rec.lhs, rec.rhs,
                                       rec.margin, "ok"});
                slots[i].push_back(std::move(row));
            };

            // near-manifold snap bound: corpus sized well inside the delta cap
            const double cap = proximity_delta_cap(ctx.p, ctx.g);
            const double delta = 0.0625 * cap * cap;
            const auto tight = perturbed_corpus(ctx.p, recipe.count, recipe.seed,
                                                0.5 * cap * recipe.amplitude);
            for (const auto& rec : check_proximity_bound(ctx.p, tight, delta, ctx.g))
                push("proximity", rec);

            const auto wide =
                perturbed_corpus(ctx.p, recipe.count, recipe.seed + 1, recipe.amplitude);
            for (const auto& rec : check_l1_comparison_bound(ctx.p, wide, ctx.g))
                push("l1_comparison", rec);

            const RadialProfile mix = normalize_mass(
                combine(0.9, gn_extremal(ctx.p, 1.0), 0.1, gn_extremal(ctx.p, 2.0)), ctx.p,
                ctx.g);
            const std::vector<double> radii{0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
            for (const PointCheck& pc : check_pointwise_mv_bound(ctx.p, mix, radii)) {
                auto row = base_cells(ctx.p, spec.resolution);
                char id[32];
                std::snprintf(id, sizeof(id), "r=%g", pc.r);
                row.insert(row.end(), {"pointwise", id, pc.in_region, pc.lhs, pc.rhs,
                                       pc.rhs - pc.lhs, pc.holds ? "ok" : "violated"});
                slots[i].push_back(std::move(row));
            }
        } catch (const std::exception& e) {
            slots[i].push_back(
                error_row(spec.params[i], spec.resolution, table.columns.size(), e.what()));
        }
    });
    for (auto& s : slots)
        for (auto& r : s) table.rows.push_back(std::move(r));
    return table;
}

Table cmd_alpha(const RunSpec& spec) {
    Table table;
    table.columns = columns({"kind", "beta", "epsilon", "value"});
    std::vector<std::vector<std::vector<json>>> slots(spec.params.size());
    parallel_items(spec.params.size(), [&](std::size_t i) {
        try {
            const ItemContext ctx = make_context(spec.params[i], spec.resolution);
            const RunSpec::Recipe recipe = spec.corpus.front();
            const int count = std::max(10, recipe.count);
            const auto corpus =
                perturbed_corpus(ctx.p, count, recipe.seed, recipe.amplitude);
            std::vector<CylField> fields;
            fields.reserve(corpus.size());
            for (const auto& entry : corpus)
                fields.push_back(lift(normalize_ratio(entry.u, ctx.p, ctx.g), ctx.p));
            const double alpha = estimate_alpha(ctx.p, fields, ctx.g);
            {
                auto row = base_cells(ctx.p, spec.resolution);
                row.insert(row.end(), {"alpha_lower_envelope", nullptr, nullptr, alpha, "ok"});
                slots[i].push_back(std::move(row));
            }
            for (double beta : {2.0, 1.5}) {
                const auto ratios = sharpness_probe(ctx.p, beta, recipe.epsilons, ctx.g);
                for (std::size_t k = 0; k < ratios.size(); ++k) {
                    auto row = base_cells(ctx.p, spec.resolution);
                    row.insert(row.end(),
                               {"sharpness", beta, recipe.epsilons[k], ratios[k], "ok"});
                    slots[i].push_back(std::move(row));
                }
            }
        } catch (const std::exception& e) {
            slots[i].push_back(
                error_row(spec.params[i], spec.resolution, table.columns.size(), e.what()));
        }
    });
    for (auto& s : slots)
        for (auto& r : s) table.rows.push_back(std::move(r));
    return table;
}

// ---- spec parsing ------------------------------------------------------

[[noreturn]] void spec_fail(const std::string& path, const std::string& anchor,
                            const std::string& message) {
    throw SpecError(path + ": " + anchor + ": " + message);
}

int byte_to_line(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

RunSpec build_run_spec(const json& j, const std::string& path, const std::string& command);

}  // namespace

RunSpec parse_run_spec(const std::string& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) throw SpecError(path + ": cannot open spec file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw SpecError(path + ":" + std::to_string(byte_to_line(text, e.byte)) + ": " +
                        e.what());
    }

    try {
        return build_run_spec(j, path, command);
    } catch (const json::exception& e) {
        // wrong field type somewhere the explicit checks did not anticipate
        throw SpecError(path + ": " + e.what());
    }
}

namespace {

RunSpec build_run_spec(const json& j, const std::string& path, const std::string& command) {
    RunSpec spec;
    spec.command = command;
    if (j.contains("command")) {
        if (!j["command"].is_string() || j["command"].get<std::string>() != command)
            spec_fail(path, "/command", "spec is for '" + j["command"].dump() +
                                            "' but the CLI invoked '" + command + "'");
    }

    if (!j.contains("params") || !j["params"].is_array() || j["params"].empty())
        spec_fail(path, "/params", "required non-empty array of {n, t} or sweep entries");
    for (std::size_t i = 0; i < j["params"].size(); ++i) {
        const json& e = j["params"][i];
        const std::string anchor = "/params/" + std::to_string(i);
        if (!e.is_object() || !e.contains("n")) spec_fail(path, anchor, "entry needs integer n");
        const int n = e["n"].get<int>();
        std::vector<double> ts;
        if (e.contains("t")) {
            ts.push_back(e["t"].get<double>());
        } else if (e.contains("t_from") && e.contains("t_to") && e.contains("steps")) {
            const double lo = e["t_from"].get<double>();
            const double hi = e["t_to"].get<double>();
            const int steps = e["steps"].get<int>();
            if (steps < 2) spec_fail(path, anchor + "/steps", "sweep needs at least 2 steps");
            for (int k = 0; k < steps; ++k)
                ts.push_back(lo + (hi - lo) * k / (steps - 1.0));
        } else {
            spec_fail(path, anchor, "entry needs t or (t_from, t_to, steps)");
        }
        for (double t : ts) {
            try {
                (void)derive_params(n, t);
            } catch (const std::domain_error& err) {
                spec_fail(path, anchor, err.what());
            }
            spec.params.push_back({n, t});
        }
    }

    if (j.contains("corpus")) {
        if (!j["corpus"].is_array() || j["corpus"].empty())
            spec_fail(path, "/corpus", "must be a non-empty array when present");
        for (std::size_t i = 0; i < j["corpus"].size(); ++i) {
            const json& e = j["corpus"][i];
            const std::string anchor = "/corpus/" + std::to_string(i);
            RunSpec::Recipe recipe;
            if (e.contains("bump")) {
                recipe.bump = e["bump"].get<std::string>();
                try {
                    (void)parse_bump(recipe.bump);
                } catch (const SpecError& err) {
                    spec_fail(path, anchor + "/bump", err.what());
                }
            }
            if (e.contains("epsilons")) {
                recipe.epsilons = e["epsilons"].get<std::vector<double>>();
                for (double eps : recipe.epsilons)
                    if (!(eps > 0.0))
                        spec_fail(path, anchor + "/epsilons", "perturbation sizes must be positive");
            }
            if (e.contains("amplitude")) recipe.amplitude = e["amplitude"].get<double>();
            if (e.contains("seed")) recipe.seed = e["seed"].get<unsigned>();
            if (e.contains("count")) {
                recipe.count = e["count"].get<int>();
                if (recipe.count < 1) spec_fail(path, anchor + "/count", "count must be positive");
            }
            if (command == "probe") {
                if (recipe.epsilons.size() < 4)
                    spec_fail(path, anchor + "/epsilons", "probe needs at least 4 sizes");
                for (double eps : recipe.epsilons)
                    if (eps > 0.2)
                        spec_fail(path, anchor + "/epsilons", "probe sizes must lie in (0, 0.2]");
            }
            spec.corpus.push_back(std::move(recipe));
        }
    }
    if (spec.corpus.empty()) {
        RunSpec::Recipe ring, core;
        core.bump = "core";
        core.seed = 2;
        spec.corpus = {ring, core};
    }

    if (j.contains("resolution")) {
        spec.resolution = j["resolution"].get<int>();
        if (spec.resolution < 8) spec_fail(path, "/resolution", "resolution must be >= 8");
    }

    const bool tabular = command == "constants" || command == "deficit" ||
                         command == "distance" || command == "probe";
    spec.output_format = tabular ? "csv" : "json";
    if (j.contains("output")) {
        const json& out = j["output"];
        if (out.contains("format")) {
            spec.output_format = out["format"].get<std::string>();
            if (spec.output_format != "csv" && spec.output_format != "json")
                spec_fail(path, "/output/format", "format must be csv or json");
        }
        if (out.contains("path")) spec.output_path = out["path"].get<std::string>();
    }
    if (spec.output_path.empty()) spec.output_path = command + "." + spec.output_format;
    return spec;
}

}  // namespace

int run(const RunSpec& spec, const std::string& out_dir) {
    Table table;
    bool gate_pass = true;
    if (spec.command == "constants")
        table = cmd_constants(spec);
    else if (spec.command == "deficit")
        table = cmd_deficit(spec);
    else if (spec.command == "identity")
        table = cmd_identity(spec, gate_pass);
    else if (spec.command == "distance")
        table = cmd_distance(spec);
    else if (spec.command == "probe")
        table = cmd_probe(spec);
    else if (spec.command == "lemmas")
        table = cmd_lemmas(spec);
    else if (spec.command == "alpha")
        table = cmd_alpha(spec);
    else
        throw SpecError("unknown command '" + spec.command + "'");

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path target = std::filesystem::path(out_dir) / spec.output_path;
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    write_atomic(target,
                 spec.output_format == "csv" ? to_csv(table) : to_json_doc(table, spec));
    return gate_pass ? 0 : 1;
}

}  // namespace gns
