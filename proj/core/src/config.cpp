#include "tfelab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tfelab/experiments.hpp"
#include "toml_lite.hpp"

namespace tfelab {

namespace {

using toml_lite::Document;
using toml_lite::Value;

[[noreturn]] void bad(const Document& doc, const Value* v,
                      const std::string& msg) {
    std::ostringstream os;
    os << doc.origin;
    if (v) os << ":" << v->line;
    os << ": " << msg;
    throw ConfigError(os.str());
}

double get_number(const Document& doc, const std::string& key, double dflt) {
    const Value* v = doc.find(key);
    if (!v) return dflt;
    if (v->kind != Value::Kind::number)
        bad(doc, v, "'" + key + "' must be a number");
    return v->num;
}

int get_int(const Document& doc, const std::string& key, int dflt) {
    const Value* v = doc.find(key);
    if (!v) return dflt;
    if (v->kind != Value::Kind::number || v->num != std::floor(v->num))
        bad(doc, v, "'" + key + "' must be an integer");
    return static_cast<int>(v->num);
}

bool get_bool(const Document& doc, const std::string& key, bool dflt) {
    const Value* v = doc.find(key);
    if (!v) return dflt;
    if (v->kind != Value::Kind::boolean)
        bad(doc, v, "'" + key + "' must be true or false");
    return v->b;
}

std::string get_string(const Document& doc, const std::string& key,
                       const std::string& dflt) {
    const Value* v = doc.find(key);
    if (!v) return dflt;
    if (v->kind != Value::Kind::string)
        bad(doc, v, "'" + key + "' must be a quoted string");
    return v->str;
}

std::vector<double> get_numbers(const Document& doc, const std::string& key,
                                const std::vector<double>& dflt) {
    const Value* v = doc.find(key);
    if (!v) return dflt;
    if (v->kind != Value::Kind::number_array)
        bad(doc, v, "'" + key + "' must be an array of numbers");
    return v->nums;
}

InitialConditionSpec read_initial(const Document& doc) {
    InitialConditionSpec spec;
    const std::string kind = get_string(doc, "initial.kind", "parabola");
    if (kind == "parabola") {
        ParabolaIc p;
        p.a = get_number(doc, "initial.a", 0.4);
        p.b = get_number(doc, "initial.b", 0.6);
        p.mass = get_number(doc, "initial.mass", 1.0);
        spec.kind = p;
    } else if (kind == "half_parabola") {
        HalfParabolaIc p;
        p.b = get_number(doc, "initial.b", 0.6);
        p.mass = get_number(doc, "initial.mass", 1.0);
        const std::string wall = get_string(doc, "initial.wall", "left");
        if (wall == "left")
            p.wall = Wall::left;
        else if (wall == "right")
            p.wall = Wall::right;
        else
            bad(doc, doc.find("initial.wall"),
                "initial.wall must be \"left\" or \"right\"");
        spec.kind = p;
    } else if (kind == "two_parabolas") {
        TwoParabolasIc p;
        p.a1 = get_number(doc, "initial.a1", 0.2);
        p.b1 = get_number(doc, "initial.b1", 0.45);
        p.m1 = get_number(doc, "initial.m1", 0.5);
        p.a2 = get_number(doc, "initial.a2", 0.55);
        p.b2 = get_number(doc, "initial.b2", 0.8);
        p.m2 = get_number(doc, "initial.m2", 0.5);
        spec.kind = p;
    } else if (kind == "table") {
        TableIc p;
        p.values = get_numbers(doc, "initial.values", {});
        if (p.values.empty())
            bad(doc, nullptr, "initial.values must be provided for kind=table");
        spec.kind = p;
    } else {
        bad(doc, doc.find("initial.kind"),
            "initial.kind must be one of parabola, half_parabola, "
            "two_parabolas, table");
    }
    spec.precursor_floor = get_number(doc, "initial.precursor_floor", 0.0);
    if (spec.precursor_floor < 0.0)
        bad(doc, doc.find("initial.precursor_floor"),
            "precursor_floor must be >= 0");
    return spec;
}

RunConfig bind(const Document& doc) {
    RunConfig cfg;
    try {
        cfg.model = ModelParams::make(get_number(doc, "model.epsilon", 1e-2),
                                      get_number(doc, "model.n", 2.0));
    } catch (const std::invalid_argument& e) {
        bad(doc, doc.find("model.epsilon") ? doc.find("model.epsilon")
                                           : doc.find("model.n"),
            e.what());
    }
    try {
        cfg.grid = make_uniform_grid(get_number(doc, "grid.x_left", 0.0),
                                     get_number(doc, "grid.x_right", 1.0),
                                     get_int(doc, "grid.n_cells", 512));
    } catch (const std::invalid_argument& e) {
        bad(doc, nullptr, std::string("grid: ") + e.what());
    }

    cfg.solver.params = cfg.model;
    cfg.solver.reg.delta = get_number(doc, "solver.delta", 0.0);
    cfg.solver.dt_init = get_number(doc, "solver.dt_init", 1e-12);
    cfg.solver.dt_min = get_number(doc, "solver.dt_min", 1e-18);
    cfg.solver.dt_max = get_number(doc, "solver.dt_max", 1e-6);
    cfg.solver.newton_tol = get_number(doc, "solver.newton_tol", 1e-11);
    cfg.solver.newton_max_iter = get_int(doc, "solver.newton_max_iter", 12);
    cfg.solver.t_end = get_number(doc, "solver.t_end", 1e-5);
    cfg.solver.undershoot_tol =
        get_number(doc, "solver.undershoot_tol", 1e-10);
    cfg.solver.allow_dt_growth =
        get_bool(doc, "solver.allow_dt_growth", true);

    cfg.initial = read_initial(doc);

    cfg.outputs.directory = get_string(doc, "output.directory", "out");
    cfg.outputs.record_every = get_number(doc, "output.record_every", 0.0);
    cfg.outputs.emit_snapshots = get_bool(doc, "output.emit_snapshots", true);
    cfg.solver.record_every = cfg.outputs.record_every;

    // Quasi-static block (defaults mirror [initial] when it is a
    // parabola-family condition).
    {
        DropletSet d;
        d.x_left = cfg.grid.x_left;
        d.x_right = cfg.grid.x_right;
        d.total_mass = 1.0;
        d.intervals = {{0.4, 0.6, 1.0, false, false}};
        try {
            d = droplet_set_from_initial(cfg.initial, cfg.grid);
        } catch (...) {
            // table initial condition; keep plain defaults
        }
        std::vector<double> da, db, dg;
        for (const auto& iv : d.intervals) {
            da.push_back(iv.a);
            db.push_back(iv.b);
            dg.push_back(iv.gamma);
        }
        const double dm = d.total_mass;
        const std::vector<double> a = get_numbers(doc, "quasistatic.a", da);
        const std::vector<double> b = get_numbers(doc, "quasistatic.b", db);
        const std::vector<double> g = get_numbers(doc, "quasistatic.gamma", dg);
        if (a.size() != b.size() || a.size() != g.size() || a.empty())
            bad(doc, nullptr,
                "quasistatic.a/b/gamma must be equal-length nonempty arrays");
        d.intervals.clear();
        for (size_t i = 0; i < a.size(); ++i) {
            DropletInterval iv;
            iv.a = a[i];
            iv.b = b[i];
            iv.gamma = g[i];
            iv.wall_a = iv.a <= d.x_left;
            iv.wall_b = iv.b >= d.x_right;
            d.intervals.push_back(iv);
        }
        d.total_mass = get_number(doc, "quasistatic.total_mass", dm);
        try {
            d.validate();
        } catch (const std::invalid_argument& e) {
            bad(doc, nullptr, std::string("quasistatic: ") + e.what());
        }
        cfg.droplets = d;
        cfg.qs.dt_init = get_number(doc, "quasistatic.dt_init", 1e-6);
        cfg.qs.dt_max = get_number(doc, "quasistatic.dt_max", 1e-3);
        cfg.qs.merge_gap = get_number(doc, "quasistatic.merge_gap", 0.0);
        cfg.qs.t_end = get_number(doc, "quasistatic.t_end", 1.0);
        cfg.qs.record_every =
            get_number(doc, "quasistatic.record_every", 0.01);
        try {
            cfg.qs.validate();
        } catch (const std::invalid_argument& e) {
            bad(doc, nullptr, std::string("quasistatic: ") + e.what());
        }
    }

    cfg.sweep.eps_list =
        get_numbers(doc, "sweep.eps_list", {1e-2, 3e-3, 1e-3});
    cfg.sweep.fit_window_fraction =
        get_number(doc, "sweep.fit_window_fraction", 0.7);
    for (size_t i = 0; i < cfg.sweep.eps_list.size(); ++i) {
        const double e = cfg.sweep.eps_list[i];
        if (!(e > 0.0 && e < 1.0))
            bad(doc, doc.find("sweep.eps_list"), "epsilon must lie in (0,1)");
        if (i > 0 && !(e < cfg.sweep.eps_list[i - 1]))
            bad(doc, doc.find("sweep.eps_list"),
                "sweep.eps_list must be strictly decreasing");
    }
    if (!(cfg.sweep.fit_window_fraction > 0.0 &&
          cfg.sweep.fit_window_fraction <= 1.0))
        bad(doc, doc.find("sweep.fit_window_fraction"),
            "fit_window_fraction must lie in (0,1]");

    try {
        cfg.solver.validate();
        initial_condition(cfg.initial, cfg.grid);  // validates against grid
    } catch (const std::invalid_argument& e) {
        bad(doc, nullptr, e.what());
    }

    if (const auto* unused = doc.first_unused())
        bad(doc, &unused->second, "unknown key '" + unused->first + "'");
    return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& path) {
    return bind(toml_lite::parse_file(path));
}

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
    return bind(toml_lite::parse(text, origin));
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string fmt_array(const std::vector<double>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt(v[i]);
    }
    return s + "]";
}

}  // namespace

std::string config_to_toml(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[model]\n";
    os << "epsilon = " << fmt(cfg.model.epsilon) << "\n";
    os << "n = " << fmt(cfg.model.n) << "\n\n";
    os << "[grid]\n";
    os << "x_left = " << fmt(cfg.grid.x_left) << "\n";
    os << "x_right = " << fmt(cfg.grid.x_right) << "\n";
    os << "n_cells = " << cfg.grid.n_cells << "\n\n";
    os << "[solver]\n";
    os << "dt_init = " << fmt(cfg.solver.dt_init) << "\n";
    os << "dt_min = " << fmt(cfg.solver.dt_min) << "\n";
    os << "dt_max = " << fmt(cfg.solver.dt_max) << "\n";
    os << "newton_tol = " << fmt(cfg.solver.newton_tol) << "\n";
    os << "newton_max_iter = " << cfg.solver.newton_max_iter << "\n";
    os << "t_end = " << fmt(cfg.solver.t_end) << "\n";
    os << "undershoot_tol = " << fmt(cfg.solver.undershoot_tol) << "\n";
    os << "delta = " << fmt(cfg.solver.reg.delta) << "\n";
    os << "allow_dt_growth = "
       << (cfg.solver.allow_dt_growth ? "true" : "false") << "\n\n";
    os << "[initial]\n";
    if (const auto* p = std::get_if<ParabolaIc>(&cfg.initial.kind)) {
        os << "kind = \"parabola\"\n";
        os << "a = " << fmt(p->a) << "\n";
        os << "b = " << fmt(p->b) << "\n";
        os << "mass = " << fmt(p->mass) << "\n";
    } else if (const auto* hp = std::get_if<HalfParabolaIc>(&cfg.initial.kind)) {
        os << "kind = \"half_parabola\"\n";
        os << "b = " << fmt(hp->b) << "\n";
        os << "mass = " << fmt(hp->mass) << "\n";
        os << "wall = \"" << (hp->wall == Wall::left ? "left" : "right")
           << "\"\n";
    } else if (const auto* tp = std::get_if<TwoParabolasIc>(&cfg.initial.kind)) {
        os << "kind = \"two_parabolas\"\n";
        os << "a1 = " << fmt(tp->a1) << "\n";
        os << "b1 = " << fmt(tp->b1) << "\n";
        os << "m1 = " << fmt(tp->m1) << "\n";
        os << "a2 = " << fmt(tp->a2) << "\n";
        os << "b2 = " << fmt(tp->b2) << "\n";
        os << "m2 = " << fmt(tp->m2) << "\n";
    } else {
        const auto& tab = std::get<TableIc>(cfg.initial.kind);
        os << "kind = \"table\"\n";
        os << "values = " << fmt_array(tab.values) << "\n";
    }
    os << "precursor_floor = " << fmt(cfg.initial.precursor_floor) << "\n\n";
    os << "[output]\n";
    os << "directory = \"" << cfg.outputs.directory << "\"\n";
    os << "record_every = " << fmt(cfg.outputs.record_every) << "\n";
    os << "emit_snapshots = " << (cfg.outputs.emit_snapshots ? "true" : "false")
       << "\n\n";
    os << "[quasistatic]\n";
    std::vector<double> a, b, g;
    for (const auto& iv : cfg.droplets.intervals) {
        a.push_back(iv.a);
        b.push_back(iv.b);
        g.push_back(iv.gamma);
    }
    os << "a = " << fmt_array(a) << "\n";
    os << "b = " << fmt_array(b) << "\n";
    os << "gamma = " << fmt_array(g) << "\n";
    os << "total_mass = " << fmt(cfg.droplets.total_mass) << "\n";
    os << "dt_init = " << fmt(cfg.qs.dt_init) << "\n";
    os << "dt_max = " << fmt(cfg.qs.dt_max) << "\n";
    os << "merge_gap = " << fmt(cfg.qs.merge_gap) << "\n";
    os << "t_end = " << fmt(cfg.qs.t_end) << "\n";
    os << "record_every = " << fmt(cfg.qs.record_every) << "\n\n";
    os << "[sweep]\n";
    os << "eps_list = " << fmt_array(cfg.sweep.eps_list) << "\n";
    os << "fit_window_fraction = " << fmt(cfg.sweep.fit_window_fraction)
       << "\n";
    return os.str();
}

void write_config_echo(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config echo: " + path);
    out << config_to_toml(cfg);
}

}  // namespace tfelab
