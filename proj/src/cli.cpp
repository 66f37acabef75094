#include "tsf/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "tsf/dgbv.hpp"

namespace tsf::cli {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string command;
    std::string builder;
    std::string model_file;
    std::string format = "text";
    std::optional<int> degree;
    int cutoff = -1;
    std::vector<std::string> checks;
    int order = -1;
    std::string out_file;
    bool all = false;
};

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Dimensions indexed by degree.
json dims_json(const GradedCarrier& c) {
    json j = json::array();
    for (int k : c.degrees()) {
        while (static_cast<int>(j.size()) < k) j.push_back(0);
        j.push_back(c.dim(k));
    }
    return j;
}

void add_checks(json& checks, const Report& r, const std::string& prefix = "") {
    for (auto c : r.to_json()) {
        c["name"] = prefix + c["name"].get<std::string>();
        checks.push_back(std::move(c));
    }
}

void add_verdict(json& checks, const std::string& name, bool ok, const std::string& witness = "",
                 const std::string& note = "") {
    json c{{"name", name}, {"ok", ok}, {"cases", 1}, {"failures", ok ? 0 : 1}};
    if (!note.empty()) c["note"] = note;
    if (!ok && !witness.empty()) c["witnesses"] = json::array({witness});
    checks.push_back(std::move(c));
}

ModelPtr load(const Options& o) {
    if (o.builder.empty() == o.model_file.empty()) throw InputError("exactly one of --builder and --model is required");
    try {
        if (!o.builder.empty()) return std::make_shared<const FoliatedModel>(builder(o.builder));
        return std::make_shared<const FoliatedModel>(load_model_file(o.model_file));
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

json cohomology_section(const FoliatedModel& m, std::optional<int> degree) {
    LinearOp d = m.basic.matrix_of([&](const Element& e) { return m.ambient.differential(e); }, 1, "d");
    json j;
    j["complex"] = "basic";
    j["degrees"] = json::array();
    for (int k : m.basic.degrees()) {
        if (degree && *degree != k) continue;
        j["degrees"].push_back({{"degree", k}, {"dimension", cohomology(d, k).q.dim}});
    }
    if (degree && j["degrees"].empty()) j["degrees"].push_back({{"degree", *degree}, {"dimension", 0}});
    return j;
}

json lefschetz_section(const SL2Package& p, json& checks) {
    auto v = hard_lefschetz_check(p);
    json j = json::array();
    std::string witness;
    for (const auto& d : v.degrees) {
        json e{{"k", d.k}, {"source_dim", d.source_dim}, {"target_dim", d.target_dim}, {"rank", d.rank}, {"iso", d.iso}};
        if (!d.iso) {
            e["witness_kind"] = d.witness_kind;
            e["witness"] = d.witness_text;
            e["witness_verified"] = d.witness_verified;
            if (witness.empty())
                witness = "k = " + std::to_string(d.k) + ", " + d.witness_kind + " witness " + d.witness_text +
                          (d.witness_verified ? " (verified)" : " (unverified)");
        }
        j.push_back(std::move(e));
    }
    add_verdict(checks, "hard Lefschetz", v.ok, witness);
    return j;
}

json ddelta_section(const SL2Package& p, json& checks) {
    auto v = ddelta_check(p);
    json j = json::array();
    std::string witness;
    for (const auto& d : v.degrees) {
        json e{{"k", d.k},
               {"im_d_cap_ker_delta", d.im_d_ker_delta.dim()},
               {"ker_d_cap_im_delta", d.ker_d_im_delta.dim()},
               {"im_d_delta", d.im_d_delta.dim()},
               {"equal", d.equal}};
        if (!d.equal) {
            e["witness"] = d.witness_text;
            e["witness_verified"] = d.witness_verified;
            if (witness.empty())
                witness = "k = " + std::to_string(d.k) + ": " + d.witness_text + (d.witness_verified ? " (verified)" : "");
        }
        j.push_back(std::move(e));
    }
    add_verdict(checks, "d delta-lemma", v.all_equal, witness);
    return j;
}

json equivariant_section(ModelPtr m, int D, const std::vector<std::string>& wanted, json& checks) {
    auto cx = std::make_shared<const CartanComplex>(build_cartan(m, D));
    json j;
    j["cutoff"] = D;
    j["safe_window"] = cx->safe_window;
    j["invariant_polynomial_dims"] = cx->sg_dims;
    j["window_dims"] = dims_json(cx->window);
    j["carrier_dims"] = dims_json(cx->carrier);
    j["cohomology"] = json::array();
    for (int k = 0; k <= cx->safe_window; ++k)
        if (cx->dG.source.has(k)) j["cohomology"].push_back({{"degree", k}, {"dimension", equivariant_cohomology(*cx, k).q.dim}});
    add_checks(checks, cartan_identities(*cx));

    auto has = [&](const std::string& s) {
        for (const auto& w : wanted)
            if (w == s || w == "all") return true;
        return false;
    };
    if (has("formality")) {
        auto f = formality_check(*cx);
        json fj = json::array();
        for (const auto& d : f.degrees) fj.push_back({{"degree", d.k}, {"lhs", d.lhs}, {"rhs", d.rhs}});
        j["formality"] = fj;
        add_verdict(checks, "equivariant formality", f.ok,
                    f.first_discrepancy ? "degree " + std::to_string(*f.first_discrepancy) : "");
    }
    if (has("dgdelta")) {
        auto v = dG_delta_lemma_check(*cx);
        j["dgdelta_entries"] = v.entries.size();
        std::string w;
        if (v.counterexample) w = "degree " + std::to_string(v.counterexample->k);
        add_verdict(checks, "d_G delta-lemma", v.ok, w,
                    std::to_string(v.entries.size()) + " spanning elements solved and re-substituted");
    }
    if (has("iota"))
        for (int a = 0; a < cx->m; ++a) add_checks(checks, verify_iota_exactness(*cx, a), "iota_" + std::to_string(a) + ": ");
    if (has("section")) {
        add_checks(checks, section_checks(*cx));
        add_checks(checks, induced_differentials_vanish(*cx));
    }
    return j;
}

json frobenius_section(const SL2Package& p, int K, const std::string& out_file, json& checks) {
    auto g = basic_dgbv(p);
    auto P = frobenius_potential(g, K);
    add_checks(checks, P.checks);
    json pj = potential_to_json(P);
    if (!out_file.empty()) {
        std::ofstream f(out_file);
        if (!f) throw InputError("cannot write " + out_file);
        f << pj.dump(2) << "\n";
    }
    return pj;
}

json sl2_literal_section(const SL2Package& p) {
    json j = json::array();
    for (const auto& c : sl2_identities(p, true).checks)
        if (!c.ok()) j.push_back({{"relation", c.name}, {"witness", c.witnesses.empty() ? "" : c.witnesses.front()}});
    return j;
}

json execute(const Options& o, ModelPtr m, json& checks) {
    json sec = json::object();
    const auto& c = o.command;
    if (c == "validate") {
        sec["basic_dims"] = dims_json(m->basic);
        sec["transverse_dimension"] = 2 * m->n;
        add_checks(checks, validate_model(*m));
    } else if (c == "cohomology") {
        sec["cohomology"] = cohomology_section(*m, o.degree);
    } else if (c == "lefschetz") {
        sec["lefschetz"] = lefschetz_section(build_sl2(m), checks);
    } else if (c == "ddelta") {
        sec["ddelta"] = ddelta_section(build_sl2(m), checks);
    } else if (c == "equivariant") {
        if (!m->action) throw InputError("model '" + m->name + "' has no Lie algebra action");
        sec["equivariant"] = equivariant_section(m, o.cutoff, o.checks.empty() ? std::vector<std::string>{"formality"} : o.checks, checks);
    } else if (c == "frobenius") {
        if (!m->chi) throw InputError("model '" + m->name + "' has no characteristic form chi");
        sec["frobenius"] = frobenius_section(build_sl2(m), o.order, o.out_file, checks);
    } else if (c == "report") {
        add_checks(checks, validate_model(*m), "validate: ");
        sec["cohomology"] = cohomology_section(*m, std::nullopt);
        auto p = build_sl2(m);
        add_checks(checks, sl2_identities(p, false), "sl2: ");
        sec["sl2_literal_failures"] = sl2_literal_section(p);
        sec["lefschetz"] = lefschetz_section(p, checks);
        sec["ddelta"] = ddelta_section(p, checks);
        if (o.all) {
            if (m->chi) {
                auto g = basic_dgbv(p);
                add_checks(checks, verify_gbv(g), "dgbv: ");
                auto pv = pairing_and_niceness(g);
                add_checks(checks, pv.axioms, "integral: ");
                json blocks = json::array();
                for (const auto& b : pv.blocks)
                    blocks.push_back({{"k", b.k}, {"l", b.l}, {"rows", b.left.size()}, {"cols", b.right.size()},
                                      {"nondegenerate", b.nondegenerate}});
                sec["pairing"] = blocks;
                add_verdict(checks, "pairing nondegenerate", pv.nice);
                bool hl = hard_lefschetz_check(p).ok && ddelta_check(p).all_equal;
                if (hl) {
                    try {
                        sec["frobenius"] = frobenius_section(p, 4, "", checks);
                    } catch (const DomainError& e) {
                        add_verdict(checks, "frobenius potential to order 4", false, e.what());
                    }
                } else {
                    sec["frobenius"] = "skipped: hard Lefschetz or the d delta-lemma fails";
                }
            } else {
                sec["dgbv"] = "skipped: no characteristic form";
            }
            if (m->action) {
                sec["equivariant"] = equivariant_section(m, o.cutoff >= 0 ? o.cutoff : 3, {"formality"}, checks);
            } else {
                sec["equivariant"] = "skipped: no Lie algebra action";
            }
        }
    }
    return sec;
}

json parameters_json(const Options& o) {
    json p = json::object();
    if (!o.builder.empty()) p["builder"] = o.builder;
    if (!o.model_file.empty()) p["model_file"] = o.model_file;
    if (o.degree) p["degree"] = *o.degree;
    if (o.cutoff >= 0) p["cutoff"] = o.cutoff;
    if (!o.checks.empty()) p["check"] = o.checks;
    if (o.order >= 0) p["order"] = o.order;
    if (o.all) p["all"] = true;
    return p;
}

void render_value(std::ostringstream& s, const json& v, int indent) {
    const std::string pad(static_cast<size_t>(indent), ' ');
    if (v.is_object()) {
        for (const auto& [k, x] : v.items()) {
            if (x.is_structured()) {
                s << pad << k << ":\n";
                render_value(s, x, indent + 2);
            } else {
                s << pad << k << ": " << (x.is_string() ? x.get<std::string>() : x.dump()) << "\n";
            }
        }
    } else if (v.is_array()) {
        bool flat = true;
        for (const auto& x : v)
            if (x.is_structured() && !(x.is_array() && std::none_of(x.begin(), x.end(), [](const json& y) { return y.is_structured(); })))
                flat = false;
        if (flat) {
            s << pad;
            for (size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
            s << "\n";
            return;
        }
        for (const auto& x : v) {
            if (x.is_object()) {
                s << pad << "-";
                for (const auto& [k, y] : x.items()) s << " " << k << "=" << (y.is_string() ? y.get<std::string>() : y.dump());
                s << "\n";
            } else {
                render_value(s, x, indent);
            }
        }
    } else {
        s << pad << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
}

}  // namespace

std::string render_text(const json& r) {
    std::ostringstream s;
    s << r["tool"]["name"].get<std::string>() << " " << r["tool"]["version"].get<std::string>() << "  "
      << r["command"].get<std::string>() << "\n";
    if (r.contains("error")) {
        s << "error: " << r["error"].get<std::string>() << "\n";
        return s.str();
    }
    s << "model: " << r["model"]["name"].get<std::string>() << "  hash " << r["model"]["hash"].get<std::string>() << "\n";
    s << "verdict: " << r["verdict"].get<std::string>() << "\n";
    for (const auto& [k, v] : r["sections"].items()) {
        s << "== " << k << "\n";
        render_value(s, v, 2);
    }
    if (!r["checks"].empty()) s << "== checks\n";
    for (const auto& c : r["checks"]) {
        const bool ok = c["ok"].get<bool>();
        s << "  [" << (c.value("skipped", false) ? "SKIP" : ok ? "PASS" : "FAIL") << "] " << c["name"].get<std::string>()
          << " (" << c["cases"].get<std::size_t>() << " cases";
        if (!ok) s << ", " << c["failures"].get<std::size_t>() << " failures";
        s << ")";
        if (c.contains("note")) s << "  " << c["note"].get<std::string>();
        s << "\n";
        if (c.contains("witnesses"))
            for (const auto& w : c["witnesses"]) s << "      " << w.get<std::string>() << "\n";
    }
    return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Transversely symplectic foliation toolkit", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    auto common = [&o](CLI::App* sub) {
        auto* b = sub->add_option("--builder", o.builder, "Built-in model name");
        auto* m = sub->add_option("--model", o.model_file, "Model file (JSON)");
        b->excludes(m);
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    };
    auto* validate = app.add_subcommand("validate", "Check the model invariants");
    auto* coh = app.add_subcommand("cohomology", "Basic cohomology dimensions");
    coh->add_option("--degree", o.degree, "Single degree");
    auto* lef = app.add_subcommand("lefschetz", "Transverse hard Lefschetz check");
    auto* dd = app.add_subcommand("ddelta", "d delta-lemma check");
    auto* eq = app.add_subcommand("equivariant", "Cartan model checks");
    eq->add_option("--cutoff", o.cutoff, "Polynomial cutoff D")->required()->check(CLI::NonNegativeNumber);
    eq->add_option("--check", o.checks, "formality, dgdelta, iota, section or all")
        ->check(CLI::IsMember({"formality", "dgdelta", "iota", "section", "all"}));
    auto* fr = app.add_subcommand("frobenius", "Formal Frobenius potential and WDVV");
    fr->add_option("--order", o.order, "Order K")->required()->check(CLI::NonNegativeNumber);
    fr->add_option("--out", o.out_file, "Write the potential to this file");
    auto* rep = app.add_subcommand("report", "Run the pipeline");
    rep->add_flag("--all", o.all, "Include dGBV, Frobenius and equivariant stages");
    rep->add_option("--cutoff", o.cutoff, "Cutoff for the equivariant stage")->check(CLI::NonNegativeNumber);
    for (auto* s : {validate, coh, lef, dd, eq, fr, rep}) common(s);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    o.command = app.get_subcommands().front()->get_name();

    json r;
    r["schema_version"] = kSchemaVersion;
    r["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    r["command"] = o.command;
    r["parameters"] = parameters_json(o);
    auto t0 = std::chrono::steady_clock::now();
    auto emit = [&](int code) {
        r["timing"] = {{"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
        if (o.format == "json")
            out << r.dump(2) << "\n";
        else
            out << render_text(r);
        return code;
    };

    ModelPtr m;
    try {
        m = load(o);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        r["error"] = e.what();
        return emit(kInputError);
    }
    r["model"] = {{"name", m->name}, {"hash", "fnv1a64:" + hex64(fnv1a64(model_to_json(*m).dump()))}};

    json checks = json::array();
    try {
        r["sections"] = execute(o, m, checks);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        r.erase("model");
        r["error"] = e.what();
        return emit(kInputError);
    } catch (const DomainError& e) {
        r["sections"] = json::object();
        add_verdict(checks, "computation", false, e.what());
    }
    bool ok = true;
    for (const auto& c : checks) ok = ok && c["ok"].get<bool>();
    r["checks"] = checks;
    r["verdict"] = ok ? "pass" : "fail";
    return emit(ok ? kPass : kMathFailure);
}

}  // namespace tsf::cli
