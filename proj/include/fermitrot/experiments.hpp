#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bounds.hpp"
#include "commutator.hpp"
#include "config.hpp"
#include "hamiltonian.hpp"
#include "instances.hpp"
#include "io.hpp"
#include "pathcount.hpp"
#include "seminorm.hpp"
#include "tightness.hpp"
#include "trotter.hpp"

namespace fermitrot {

// Reads one JSON object, rejecting keys that were never asked for.
class Fields {
  public:
    Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        require(j_.is_object(), where_ + " must be a JSON object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        if (!has(key)) return fallback;
        return convert<T>(j_.at(key), key);
    }

    template <class T>
    T need(const std::string& key) {
        require(has(key), where_ + " needs '" + key + "'");
        return convert<T>(j_.at(key), key);
    }

    const json& raw(const std::string& key) {
        require(has(key), where_ + " needs '" + key + "'");
        return j_.at(key);
    }

    void finish() const {
        for (const auto& [k, v] : j_.items())
            require(seen_.count(k) > 0, "unknown field '" + k + "' in " + where_);
    }

  private:
    template <class T>
    T convert(const json& v, const std::string& key) const {
        try {
            if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::size_t>) {
                require(v.is_number_integer(), where_ + "." + key + " must be an integer");
            } else if constexpr (std::is_same_v<T, double>) {
                require(v.is_number(), where_ + "." + key + " must be a number");
            } else if constexpr (std::is_same_v<T, bool>) {
                require(v.is_boolean(), where_ + "." + key + " must be a boolean");
            } else if constexpr (std::is_same_v<T, std::string>) {
                require(v.is_string(), where_ + "." + key + " must be a string");
            }
            return v.get<T>();
        } catch (const json::exception&) {
            throw invalid_input(where_ + "." + key + " has the wrong type");
        }
    }

    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

struct RunOptions {
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

struct Report {
    CsvWriter csv{{}};
    json data = json::object();
    bool ok = true; // selfcheck verdict
};

namespace detail {

// Runs f(i) for i in [0, count) on up to `jobs` threads; results land in slot order.
template <class R>
std::vector<R> ordered_map(std::size_t count, unsigned jobs, const std::function<R(std::size_t)>& f) {
    std::vector<R> out(count);
    std::vector<std::exception_ptr> errors(count);
    const unsigned workers = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    auto work = [&](unsigned w) {
        for (std::size_t i = w; i < count; i += workers) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

template <class T>
std::vector<T> list_field(Fields& f, const std::string& key, std::vector<T> fallback) {
    if (!f.has(key)) return fallback;
    const json& a = f.raw(key);
    require(a.is_array() && !a.empty(), "'" + key + "' must be a non-empty array");
    std::vector<T> out;
    for (const auto& x : a) {
        if constexpr (std::is_same_v<T, int>) require(x.is_number_integer(), "'" + key + "' entries must be integers");
        else if constexpr (std::is_same_v<T, double>) require(x.is_number(), "'" + key + "' entries must be numbers");
        else require(x.is_string(), "'" + key + "' entries must be strings");
        out.push_back(x.get<T>());
    }
    return out;
}

inline std::string fmt(double x) { return format_double(x); }
inline std::string fmt(int x) { return std::to_string(x); }

} // namespace detail

// ---- instances ----

struct InstanceSpec {
    json source;
    std::string kind;

    // Fresh coefficients; random kinds draw from rng.
    CoefficientPair build(Rng& rng) const {
        Fields f(source, "instance");
        const std::string k = f.need<std::string>("kind");
        CoefficientPair out;
        if (k == "random") {
            out = random_coefficients(f.need<int>("n"), rng);
        } else if (k == "random_sparse") {
            const int n = f.need<int>("n");
            out = random_sparse_coefficients(n, f.need<int>("d"), rng);
        } else if (k == "hubbard") {
            out = fermi_hubbard(detail::list_field<int>(f, "extents", {2}), f.get<double>("s", 1.0), f.get<double>("v", 1.0),
                                f.get<bool>("periodic", false));
        } else if (k == "plane_wave") {
            std::vector<NucleusSpec> nuclei;
            if (f.has("nuclei")) {
                const json& arr = f.raw("nuclei");
                require(arr.is_array(), "'nuclei' must be an array");
                for (const auto& nj : arr) {
                    Fields nf(nj, "nucleus");
                    NucleusSpec spec;
                    spec.charge = nf.get<double>("charge", 1.0);
                    const auto pos = detail::list_field<double>(nf, "position", {0.0, 0.0, 0.0});
                    require(pos.size() == 3, "nucleus position needs three coordinates");
                    std::copy(pos.begin(), pos.end(), spec.position.begin());
                    nf.finish();
                    nuclei.push_back(spec);
                }
            }
            const int n = f.need<int>("n");
            out = plane_wave(n, f.get<double>("omega", n), f.need<int>("eta"), nuclei);
        } else if (k == "dense_tightness") {
            const int n = f.need<int>("n");
            out = tightness_instance(DenseInstance{f.get<double>("s", n), f.get<double>("w", 1.0)}, n);
        } else if (k == "sparse_tightness") {
            out = tightness_instance(SparseInstance{f.get<double>("u", 1.0), f.get<double>("w", 1.0), f.get<int>("d", 2)},
                                     f.need<int>("n"));
        } else if (k == "coefficients") {
            out = coefficients_from_json(f.raw("data"));
        } else {
            throw invalid_input("unknown instance kind '" + k + "'");
        }
        f.finish();
        return out;
    }

    bool random() const { return kind == "random" || kind == "random_sparse"; }
};

inline InstanceSpec parse_instance(const json& j) {
    Fields f(j, "instance");
    InstanceSpec spec{j, f.need<std::string>("kind")};
    Rng probe(0);
    spec.build(probe); // validates eagerly so bad configs fail before any work
    return spec;
}

inline json default_instance() { return {{"kind", "random"}, {"n", 6}}; }

// ---- error ----

inline Report run_error(const json& cfg, const RunOptions& opt) {
    Fields f(cfg, "config");
    const auto inst = parse_instance(f.get<json>("instance", default_instance()));
    const int eta = f.get<int>("eta", 3);
    const int count = f.get<int>("instances", 1);
    const auto orders = detail::list_field<int>(f, "orders", {1, 2});
    const auto times = detail::list_field<double>(f, "times", {0.02, 0.04, 0.06, 0.08, 0.1});
    const auto steps = detail::list_field<int>(f, "steps", {1});
    f.finish();
    require(count >= 1, "'instances' must be positive");
    for (int p : orders) build_formula(p);
    for (double t : times) require(t > 0.0, "times must be positive");

    Rng rng(opt.seed);
    std::vector<CoefficientPair> coeffs;
    for (int i = 0; i < count; ++i) coeffs.push_back(inst.build(rng));

    struct Cell {
        std::vector<double> errors; // [p][r][t] flattened
    };
    const auto cells = detail::ordered_map<Cell>(coeffs.size(), opt.jobs, [&](std::size_t i) {
        const auto h = assemble(coeffs[i], enumerate_sector(coeffs[i].n(), eta));
        const SplitEvolution ev(h.T, h.V);
        Cell c;
        for (int p : orders)
            for (int r : steps)
                for (double t : times) c.errors.push_back(trotter_error(build_formula(p), ev, t, r));
        return c;
    });

    Report rep;
    rep.csv = CsvWriter({"record", "instance", "p", "r", "t", "value"});
    json rows = json::array(), slopes = json::array();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::size_t k = 0;
        for (int p : orders)
            for (int r : steps) {
                std::vector<double> es;
                for (double t : times) {
                    const double e = cells[i].errors[k++];
                    es.push_back(e);
                    rep.csv.row({"error", std::to_string(i), detail::fmt(p), detail::fmt(r), detail::fmt(t), detail::fmt(e)});
                    rows.push_back({{"instance", i}, {"p", p}, {"r", r}, {"t", t}, {"error", e}});
                }
                if (times.size() >= 2 && std::all_of(es.begin(), es.end(), [](double e) { return e > 0.0; })) {
                    const double s = fit_error_order(times, es);
                    rep.csv.row({"slope", std::to_string(i), detail::fmt(p), detail::fmt(r), "", detail::fmt(s)});
                    slopes.push_back({{"instance", i}, {"p", p}, {"r", r}, {"slope", s}});
                }
            }
    }
    rep.data = {{"errors", rows}, {"slopes", slopes}};
    return rep;
}

// ---- bound ----

inline Report run_bound(const json& cfg, const RunOptions& opt) {
    Fields f(cfg, "config");
    const auto inst = parse_instance(f.get<json>("instance", default_instance()));
    const int eta = f.get<int>("eta", 3);
    const int count = f.get<int>("instances", 1);
    const auto orders = detail::list_field<int>(f, "orders", {1, 2});
    const auto times = detail::list_field<double>(f, "times", {0.05, 0.1, 0.2});
    const auto families = detail::list_field<std::string>(f, "families", {"general", "sparse", "path_dense"});
    json step_cfg = f.get<json>("step_count", json());
    f.finish();
    require(count >= 1, "'instances' must be positive");
    for (const auto& name : families) {
        const auto fam = parse_bound_family(name);
        require(fam == BoundFamily::general || fam == BoundFamily::sparse || fam == BoundFamily::path_dense,
                "bound sweeps evaluate general, sparse and path_dense; use step_count for the others");
    }
    for (int p : orders) build_formula(p);

    Rng rng(opt.seed);
    std::vector<CoefficientPair> coeffs;
    for (int i = 0; i < count; ++i) coeffs.push_back(inst.build(rng));

    struct Row {
        std::vector<BoundRecord> records;
        std::vector<double> measured;
    };
    const auto rows = detail::ordered_map<Row>(coeffs.size(), opt.jobs, [&](std::size_t i) {
        const auto& c = coeffs[i];
        const auto h = assemble(c, enumerate_sector(c.n(), eta));
        const SplitEvolution ev(h.T, h.V);
        const int d = interaction_sparsity(c);
        Row row;
        for (int p : orders)
            for (double t : times) {
                const double measured = trotter_error(build_formula(p), ev, t, 1);
                std::map<std::string, double> params{{"instance", static_cast<double>(i)}, {"p", p}, {"t", t},
                                                     {"n", c.n()}, {"eta", eta}, {"d", d}};
                for (const auto& name : families) {
                    double v = 0.0;
                    switch (parse_bound_family(name)) {
                    case BoundFamily::general: v = scaling_bound_general(p, c.tau_spectral(), c.nu_max(), eta, t); break;
                    case BoundFamily::sparse: v = scaling_bound_sparse(p, c.tau_max(), c.nu_max(), d, eta, t); break;
                    default: v = scaling_bound_path_dense(p, c.tau_max(), c.nu_max(), c.n(), eta, t); break;
                    }
                    row.records.push_back({name, params, v, false});
                    row.measured.push_back(measured);
                }
                if (p <= 2) {
                    row.records.push_back({"rigorous_low_order", params, rigorous_bound_low_order(p, h.T, h.V, t), true});
                    row.measured.push_back(measured);
                }
            }
        return row;
    });

    Report rep;
    rep.csv = CsvWriter({"record", "family", "instance", "p", "t", "value", "certified", "measured", "ratio"});
    json records = json::array();
    std::map<std::string, double> fitted;
    std::map<std::string, bool> certified_ok;
    for (const auto& row : rows)
        for (std::size_t k = 0; k < row.records.size(); ++k) {
            const auto& r = row.records[k];
            const double m = row.measured[k];
            const double ratio = r.value > 0.0 ? m / r.value : 0.0;
            if (r.certified) {
                auto [it, fresh] = certified_ok.emplace(r.family, true);
                it->second = it->second && m <= r.value * (1 + 1e-9) + 1e-15;
            } else {
                fitted[r.family] = std::max(fitted[r.family], ratio);
            }
            rep.csv.row({"bound", r.family, detail::fmt(static_cast<int>(r.params.at("instance"))),
                         detail::fmt(static_cast<int>(r.params.at("p"))), detail::fmt(r.params.at("t")), detail::fmt(r.value),
                         r.certified ? "true" : "false", detail::fmt(m), detail::fmt(ratio)});
            json rec = r.to_json();
            rec["measured"] = m;
            records.push_back(rec);
        }
    json dominance = json::object();
    for (const auto& [fam, c] : fitted) {
        rep.csv.row({"fitted_constant", fam, "", "", "", detail::fmt(c), "false", "", ""});
        dominance[fam] = {{"fitted_constant", c}};
    }
    for (const auto& [fam, ok] : certified_ok) {
        rep.csv.row({"certified_dominance", fam, "", "", "", ok ? "1" : "0", "true", "", ""});
        dominance[fam] = {{"dominates", ok}};
    }
    rep.data = {{"records", records}, {"dominance", dominance}};

    if (!step_cfg.is_null()) {
        Fields sf(step_cfg, "step_count");
        const auto fam = parse_bound_family(sf.need<std::string>("family"));
        BoundParams b;
        b.spec_tau = sf.get<double>("spec_tau", 0.0);
        b.max_tau = sf.get<double>("max_tau", 0.0);
        b.max_nu = sf.get<double>("max_nu", 0.0);
        b.n = sf.get<int>("n", 0);
        b.eta = sf.get<int>("eta", 0);
        b.d = sf.get<int>("d", 0);
        const int p = sf.need<int>("p");
        const double t = sf.need<double>("t"), eps = sf.need<double>("eps");
        sf.finish();
        const long long r = step_count(p, fam, b, t, eps);
        rep.csv.row({"step_count", to_string(fam), "", detail::fmt(p), detail::fmt(t), std::to_string(r), "false", "", ""});
        rep.data["step_count"] = {{"family", to_string(fam)}, {"p", p}, {"t", t}, {"eps", eps}, {"r", r}};
    }
    return rep;
}

// ---- commutator ----

inline Report run_commutator(const json& cfg, const RunOptions& opt) {
    Fields f(cfg, "config");
    const auto inst = parse_instance(f.get<json>("instance", json{{"kind", "random"}, {"n", 5}}));
    const int eta = f.get<int>("eta", 2);
    const int pmax = f.get<int>("max_order", 3);
    f.finish();
    require(pmax >= 1 && pmax <= 8, "'max_order' must lie in [1, 8]");

    Rng rng(opt.seed);
    const auto c = inst.build(rng);
    const auto h = assemble(c, enumerate_sector(c.n(), eta));
    std::vector<GammaWord> words;
    for (int p = 1; p <= pmax; ++p)
        for (auto& g : gamma_enumeration(p)) words.push_back(g);
    const auto norms = detail::ordered_map<double>(words.size(), opt.jobs, [&](std::size_t i) {
        return fermionic_seminorm(nested_commutator(words[i], h.T, h.V));
    });

    Report rep;
    rep.csv = CsvWriter({"gamma", "p", "weight", "seminorm", "chain_bound"});
    json rows = json::array();
    for (std::size_t i = 0; i < words.size(); ++i) {
        const double b = chain_seminorm_bound(words[i], c, eta);
        rep.csv.row({words[i].str(), detail::fmt(words[i].order()), detail::fmt(words[i].weight()), detail::fmt(norms[i]),
                     detail::fmt(b)});
        rows.push_back({{"gamma", words[i].str()}, {"p", words[i].order()}, {"seminorm", norms[i]}, {"chain_bound", b}});
    }
    rep.data = {{"rows", rows}};
    return rep;
}

// ---- pathcount ----

inline Report run_pathcount(const json& cfg, const RunOptions& opt) {
    Fields f(cfg, "config");
    const auto inst = parse_instance(f.get<json>("instance", json{{"kind", "random_sparse"}, {"n", 6}, {"d", 2}}));
    const int eta = f.get<int>("eta", 2);
    const auto orders = detail::list_field<int>(f, "orders", {1, 2});
    const auto rules_name = f.get<std::string>("rules", "standard");
    const auto budget = f.get<std::size_t>("budget", default_tolerances().enumeration_budget);
    const bool tables = f.get<bool>("degree_tables", false);
    f.finish();
    require(rules_name == "standard" || rules_name == "normal_ordered", "'rules' must be standard or normal_ordered");

    Rng rng(opt.seed);
    const auto c = inst.build(rng);
    const auto h = assemble(c, enumerate_sector(c.n(), eta));
    const int d = interaction_sparsity(c);
    EnumerationOptions eo;
    eo.rules = rules_name == "standard" ? Ruleset::standard : Ruleset::normal_ordered;
    eo.budget = budget;
    eo.jobs = opt.jobs;

    Report rep;
    rep.csv = CsvWriter({"gamma", "p", "rules", "max_degree", "total_paths", "max_site_paths", "site_cap", "closed_form_sparse",
                         "closed_form_dense", "path_bound", "seminorm"});
    json rows = json::array(), degree_tables = json::array();
    for (int p : orders) {
        require(p >= 1, "orders must be positive");
        double fact = 1.0;
        for (int i = 2; i <= p + 1; ++i) fact *= i;
        for (const auto& g : gamma_enumeration(p)) {
            const auto t = degree_table(g, c, eta, eo);
            const double pb = std::pow(c.tau_max(), g.weight()) * std::pow(c.nu_max(), p + 1 - g.weight()) * t.max_degree();
            const double sn = fermionic_seminorm(nested_commutator(g, h.T, h.V));
            const double site_max = t.site_paths.empty() ? 0.0 : *std::max_element(t.site_paths.begin(), t.site_paths.end());
            const double cap = std::pow(2.0 * d, p + 1) * fact / 2.0;
            const double cs = closed_form_counts(p, SparseRegime{d, eta});
            const double cd = closed_form_counts(p, DenseRegime{c.n(), eta, g.weight()});
            rep.csv.row({g.str(), detail::fmt(p), rules_name, detail::fmt(t.max_degree()), detail::fmt(t.total_paths),
                         detail::fmt(site_max), detail::fmt(cap), detail::fmt(cs), detail::fmt(cd), detail::fmt(pb),
                         detail::fmt(sn)});
            rows.push_back({{"gamma", g.str()}, {"p", p}, {"max_degree", t.max_degree()}, {"total_paths", t.total_paths},
                            {"max_site_paths", site_max}, {"site_cap", cap}, {"closed_form_sparse", cs},
                            {"closed_form_dense", cd}, {"path_bound", pb}, {"seminorm", sn}});
            if (tables) degree_tables.push_back(degree_table_to_json(g, t));
        }
    }
    rep.data = {{"rules", rules_name}, {"d", d}, {"rows", rows}};
    if (tables) rep.data["degree_tables"] = degree_tables;
    return rep;
}

// ---- tightness ----

inline std::vector<TightnessPoint> default_tightness_grid(TightnessFamily fam) {
    std::vector<TightnessPoint> g;
    for (int n : {8, 12, 16}) {
        if (fam == TightnessFamily::T_first || fam == TightnessFamily::V_first) g.push_back({n, n / 4, 0, 1});
        else g.push_back({n, 4, 4, 1});
    }
    return g;
}

inline Report run_tightness(const json& cfg, const RunOptions& opt, const std::string& family_override = "") {
    Fields f(cfg, "config");
    std::string fam_name = f.get<std::string>("family", "V_first");
    if (!family_override.empty()) fam_name = family_override;
    const auto fam = parse_tightness_family(fam_name);
    std::vector<TightnessPoint> grid;
    if (f.has("points")) {
        const json& arr = f.raw("points");
        require(arr.is_array() && !arr.empty(), "'points' must be a non-empty array");
        for (const auto& pj : arr) {
            Fields pf(pj, "point");
            TightnessPoint pt{pf.need<int>("n"), pf.need<int>("eta"), pf.get<int>("d", 0), pf.get<int>("p", 1)};
            pf.finish();
            grid.push_back(pt);
        }
    } else {
        grid = default_tightness_grid(fam);
    }
    TightnessScale sc;
    if (f.has("scale")) {
        Fields sf(f.raw("scale"), "scale");
        if (sf.has("s")) sc.s = sf.need<double>("s");
        sc.w = sf.get<double>("w", 1.0);
        sc.u = sf.get<double>("u", 1.0);
        sf.finish();
    }
    f.finish();
    for (const auto& pt : grid) {
        require(pt.p >= 1, "tightness order must be positive");
        build_states(StateVariant::psi, pt.n, pt.eta);
    }

    const auto rows = detail::ordered_map<TightnessRow>(grid.size(), opt.jobs,
                                                         [&](std::size_t i) { return tightness_row(fam, grid[i], sc); });
    Report rep;
    rep.csv = CsvWriter({"family", "n", "eta", "d", "p", "value_re", "value_im", "leading", "ratio"});
    json out = json::array();
    for (const auto& r : rows) {
        rep.csv.row({to_string(r.family), detail::fmt(r.point.n), detail::fmt(r.point.eta), detail::fmt(r.point.d),
                     detail::fmt(r.point.p), detail::fmt(r.value.real()), detail::fmt(r.value.imag()), detail::fmt(r.leading),
                     r.ratio ? detail::fmt(*r.ratio) : ""});
        out.push_back({{"family", to_string(r.family)},
                       {"n", r.point.n},
                       {"eta", r.point.eta},
                       {"d", r.point.d},
                       {"p", r.point.p},
                       {"value_re", r.value.real()},
                       {"value_im", r.value.imag()},
                       {"leading", r.leading},
                       {"ratio", r.ratio ? json(*r.ratio) : json()}});
    }
    rep.data = {{"rows", out}};
    return rep;
}

// ---- hamiltonian ----

inline Report run_hamiltonian(const json& cfg, const RunOptions& opt) {
    Fields f(cfg, "config");
    const auto inst = parse_instance(f.get<json>("instance", default_instance()));
    f.finish();
    Rng rng(opt.seed);
    const auto c = inst.build(rng);

    Report rep;
    rep.csv = CsvWriter({"j", "k", "tau_re", "tau_im", "nu"});
    for (int j = 0; j < c.n(); ++j)
        for (int k = 0; k < c.n(); ++k)
            rep.csv.row({detail::fmt(j), detail::fmt(k), detail::fmt(c.tau(j, k).real()), detail::fmt(c.tau(j, k).imag()),
                         detail::fmt(c.nu(j, k))});
    rep.data = {{"coefficients", coefficients_to_json(c)},
                {"norms",
                 {{"tau_spectral", c.tau_spectral()},
                  {"tau_max", c.tau_max()},
                  {"nu_max", c.nu_max()},
                  {"sparsity", interaction_sparsity(c)}}}};
    return rep;
}

// ---- selfcheck ----

struct CheckResult {
    std::string name;
    bool passed;
    double residual;
};

inline std::vector<CheckResult> selfcheck_suite(std::uint64_t seed, int max_n) {
    std::vector<CheckResult> out;
    auto add = [&](std::string name, double residual, double tol) { out.push_back({std::move(name), residual <= tol, residual}); };

    // CAR and number-operator identities
    double car = 0.0, num = 0.0;
    for (int n = 1; n <= max_n; ++n)
        for (int eta = 0; eta <= n; ++eta) {
            const auto s = enumerate_sector(n, eta);
            const auto id = SectorOperator::identity(s);
            SectorOperator total = SectorOperator::zero(s);
            for (int j = 0; j < n; ++j) {
                total += number_op(j, s);
                if (eta == n) continue;
                const auto up = enumerate_sector(n, eta + 1);
                for (int k = 0; k < n; ++k) {
                    SectorOperator anti = hopping_op(j, k, s) + annihilation_op(k, up) * creation_op(j, s);
                    if (j == k) anti -= id;
                    car = std::max(car, anti.matrix.max_abs());
                }
            }
            num = std::max(num, max_abs_diff(total.matrix, id.matrix * cplx(eta)));
        }
    add("anticommutation", car, 1e-12);
    add("number_operator", num, 1e-12);

    Rng rng(seed);
    // seminorm axioms on random operators
    double axiom = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = enumerate_sector(std::min(max_n, 5), 2);
        const SectorOperator x{s, s, random_matrix(s->dim(), s->dim(), rng)};
        const SectorOperator y{s, s, random_matrix(s->dim(), s->dim(), rng)};
        for (const auto& r : seminorm_axiom_check(x, y, rng.complex_normal(), rng.next(), 1e-9).results)
            if (!r.passed) axiom = std::max(axiom, std::max(r.residual, 1.0));
    }
    add("seminorm_axioms", axiom, 0.0);

    // Fourier identity for the all-ones hopping
    double ffft = 0.0;
    for (int eta = 1; eta <= 3; ++eta) {
        const auto s = enumerate_sector(6, eta);
        const auto t = assemble(tightness_instance(DenseInstance{6.0, 1.0}, 6), s).T;
        ffft = std::max(ffft, max_abs_diff(ffft_conjugate(t, 6).matrix, (number_op(0, s) * cplx(6.0)).matrix));
    }
    add("fourier_hopping_identity", ffft, 1e-12);

    // effective commutator block
    double eff = 0.0;
    for (int n : {4, 6, 8})
        eff = std::max(eff, max_abs_diff(effective_commutator_block(n, 2), projected_commutator_block(n, 2)));
    add("effective_commutator", eff, 1e-8);

    // single-layer decomposition and path soundness on a random instance
    const auto c = random_coefficients(4, rng);
    const auto s = enumerate_sector(4, 2);
    const auto h = assemble(c, s);
    SectorOperator sum = SectorOperator::zero(s);
    for (const auto& t : single_layer_terms(c, s)) sum += t;
    add("single_layer_terms", max_abs_diff(sum.matrix, commutator(h.T, h.V).matrix), 1e-12);

    double sound = 0.0;
    for (auto rules : {Ruleset::standard, Ruleset::normal_ordered}) {
        SectorOperator got = SectorOperator::zero(s);
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    for (int m = 0; m < 4; ++m) {
                        const cplx w = c.tau(j, k) * c.nu(l, m);
                        got += paths_operator(expand_paths({{1, j, k}, {0, l, m}}, rules), s) * w;
                    }
        sound = std::max(sound, max_abs_diff(got.matrix, commutator(h.T, h.V).matrix));
    }
    add("path_soundness", sound, 1e-11);

    // certified low-order dominance
    double dom = 0.0;
    const SplitEvolution ev(h.T, h.V);
    for (int p : {1, 2})
        for (double t : {0.05, 0.2})
            dom = std::max(dom, trotter_error(build_formula(p), ev, t, 1) - rigorous_bound_low_order(p, h.T, h.V, t));
    add("low_order_dominance", std::max(0.0, dom), 1e-12);

    // lemma spot checks
    std::vector<SectorOperator> bs, cs;
    for (int i = 0; i < 3; ++i) {
        bs.push_back({s, s, random_matrix(s->dim(), s->dim(), rng)});
        cs.push_back({s, s, random_matrix(s->dim(), s->dim(), rng)});
    }
    const bool lemmas = lemma_cauchy_check(bs, cs) && lemma_diagonalization_check(random_hermitian(3, rng), bs) &&
                        lemma_holder_check(bs, cs);
    add("operator_lemmas", lemmas ? 0.0 : 1.0, 0.0);
    return out;
}

inline Report run_selfcheck(const json& cfg, const RunOptions& opt) {
    Fields f(cfg, "config");
    const int max_n = f.get<int>("max_n", 5);
    f.finish();
    require(max_n >= 2 && max_n <= 8, "'max_n' must lie in [2, 8]");
    Report rep;
    rep.csv = CsvWriter({"check", "passed", "residual"});
    json rows = json::array();
    for (const auto& r : selfcheck_suite(opt.seed, max_n)) {
        rep.ok = rep.ok && r.passed;
        rep.csv.row({r.name, r.passed ? "true" : "false", detail::fmt(r.residual)});
        rows.push_back({{"check", r.name}, {"passed", r.passed}, {"residual", r.residual}});
    }
    rep.data = {{"checks", rows}, {"all_passed", rep.ok}};
    return rep;
}

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"error", "bound", "commutator", "pathcount", "tightness", "hamiltonian", "selfcheck"};
    return names;
}

inline Report run_command(const std::string& cmd, const json& cfg, const RunOptions& opt, const std::string& family = "") {
    if (cmd == "error") return run_error(cfg, opt);
    if (cmd == "bound") return run_bound(cfg, opt);
    if (cmd == "commutator") return run_commutator(cfg, opt);
    if (cmd == "pathcount") return run_pathcount(cfg, opt);
    if (cmd == "tightness") return run_tightness(cfg, opt, family);
    if (cmd == "hamiltonian") return run_hamiltonian(cfg, opt);
    if (cmd == "selfcheck") return run_selfcheck(cfg, opt);
    throw invalid_input("unknown command '" + cmd + "'");
}

// The full artifact text for one run.
inline std::string render(const Report& rep, const Provenance& prov, const std::string& format) {
    std::ostringstream os;
    if (format == "csv") {
        rep.csv.write(os, &prov);
    } else if (format == "json") {
        json doc = rep.data;
        doc["provenance"] = prov.to_json();
        os << doc.dump(2) << "\n";
    } else {
        throw invalid_input("format must be csv or json");
    }
    return os.str();
}

} // namespace fermitrot
