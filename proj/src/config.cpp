#include "lambda_cpt/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "lambda_cpt/scenarios.hpp"

namespace lambda_cpt {

namespace {

struct Entry {
    std::string value;
    int line;
    int value_column;
};

constexpr std::array<std::string_view, 35> kKnownKeys = {
    "command",
    "scenario",
    "initial",
    "params.r1",
    "params.r2",
    "params.gamma1",
    "params.gamma2",
    "params.p",
    "params.delta",
    "initial.aa",
    "initial.bb",
    "initial.cc",
    "initial.ab_re",
    "initial.ab_im",
    "initial.ac_re",
    "initial.ac_im",
    "initial.bc_re",
    "initial.bc_im",
    "integrator.method",
    "integrator.step",
    "integrator.abs_tol",
    "integrator.rel_tol",
    "integrator.horizon",
    "integrator.convergence_tol",
    "integrator.sample_stride",
    "integrator.stop_at_convergence",
    "output.dir",
    "output.csv",
    "output.json",
    "sweep.r1",
    "sweep.r2",
    "sweep.gamma1",
    "sweep.gamma2",
    "dressed.r1",
    "dressed.r2",
};

bool is_known(std::string_view key) {
    for (auto k : kKnownKeys) {
        if (k == key) return true;
    }
    return false;
}

std::string_view trim(std::string_view s, int* offset = nullptr) {
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    std::size_t e = s.size();
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    if (offset) *offset = static_cast<int>(b);
    return s.substr(b, e - b);
}

double parse_double(const Entry& e, std::string_view text, int column) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw ConfigError(e.line, column, "expected a number, got '" + std::string(text) + "'");
    }
    return v;
}

double parse_double(const Entry& e) { return parse_double(e, e.value, e.value_column); }

std::vector<double> parse_list(const Entry& e) {
    std::vector<double> out;
    std::string_view rest = e.value;
    int column = e.value_column;
    for (;;) {
        const std::size_t comma = rest.find(',');
        int lead = 0;
        const std::string_view item = trim(rest.substr(0, comma), &lead);
        out.push_back(parse_double(e, item, column + lead));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
        column += static_cast<int>(comma) + 1;
    }
    return out;
}

bool parse_bool(const Entry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ConfigError(e.line, e.value_column, "expected true or false, got '" + e.value + "'");
}

std::string fmt(double x) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

std::string fmt_list(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += fmt(xs[i]);
    }
    return out;
}

std::string preset_label(const DensityMatrix& rho) {
    for (auto name : initial_states::names()) {
        if (initial_states::by_name(name)->matrix() == rho.matrix()) {
            return std::string(name);
        }
    }
    return "explicit";
}

} // namespace

ConfigError::ConfigError(int line, int column, const std::string& message)
    : Error("config:" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

std::string_view to_string(Command command) noexcept {
    switch (command) {
    case Command::Simulate: return "simulate";
    case Command::Steady: return "steady";
    case Command::Sweep: return "sweep";
    case Command::Dressed: return "dressed";
    case Command::Scenarios: return "scenarios";
    }
    return "simulate";
}

std::optional<Command> parse_command(std::string_view text) noexcept {
    for (Command c : {Command::Simulate, Command::Steady, Command::Sweep, Command::Dressed,
                      Command::Scenarios}) {
        if (to_string(c) == text) return c;
    }
    return std::nullopt;
}

std::vector<SystemParams> RunConfig::sweep_grid() const {
    auto axis = [](const std::vector<double>& values, double fallback) {
        return values.empty() ? std::vector<double>{fallback} : values;
    };
    return make_grid(axis(sweep.r1, params.r1()), axis(sweep.r2, params.r2()),
                     axis(sweep.gamma1, params.gamma1()), axis(sweep.gamma2, params.gamma2()),
                     params.p(), params.delta());
}

bool semantically_equal(const RunConfig& x, const RunConfig& y) {
    return x.command == y.command && x.scenario == y.scenario && x.params == y.params &&
           x.initial.matrix() == y.initial.matrix() && x.initial_label == y.initial_label &&
           x.integrator == y.integrator && x.output == y.output && x.sweep == y.sweep &&
           x.dressed_r1 == y.dressed_r1 && x.dressed_r2 == y.dressed_r2;
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        int lead = 0;
        const std::string_view line = trim(raw, &lead);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(line_no, lead + 1, "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        int value_lead = 0;
        const std::string_view value = trim(line.substr(eq + 1), &value_lead);
        const int value_column = lead + static_cast<int>(eq) + 2 + value_lead;
        if (key.empty()) {
            throw ConfigError(line_no, lead + 1, "missing key before '='");
        }
        if (!is_known(key)) {
            throw ConfigError(line_no, lead + 1, "unknown key '" + key + "'");
        }
        if (value.empty()) {
            throw ConfigError(line_no, value_column, "missing value for '" + key + "'");
        }
        if (entries.count(key)) {
            throw ConfigError(line_no, lead + 1, "duplicate key '" + key + "'");
        }
        entries.emplace(key, Entry{std::string(value), line_no, value_column});
    }

    auto get = [&](const char* key) -> const Entry* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    RunConfig cfg;
    if (const Entry* e = get("command")) {
        auto c = parse_command(e->value);
        if (!c) throw ConfigError(e->line, e->value_column, "unknown command '" + e->value + "'");
        cfg.command = *c;
    }

    double r1 = cfg.params.r1(), r2 = cfg.params.r2(), g1 = cfg.params.gamma1(),
           g2 = cfg.params.gamma2(), p = cfg.params.p(), delta = cfg.params.delta();
    Matrix3c initial = cfg.initial.matrix();

    if (const Entry* e = get("scenario")) {
        auto spec = find_scenario(e->value);
        if (!spec) {
            throw ConfigError(e->line, e->value_column, "unknown scenario '" + e->value + "'");
        }
        cfg.scenario = spec->name;
        r1 = spec->params.r1();
        r2 = spec->params.r2();
        g1 = spec->params.gamma1();
        g2 = spec->params.gamma2();
        p = spec->params.p();
        delta = spec->params.delta();
        initial = spec->initial.matrix();
        cfg.integrator.horizon = spec->horizon;
    }

    if (const Entry* e = get("params.r1")) r1 = parse_double(*e);
    if (const Entry* e = get("params.r2")) r2 = parse_double(*e);
    if (const Entry* e = get("params.gamma1")) g1 = parse_double(*e);
    if (const Entry* e = get("params.gamma2")) g2 = parse_double(*e);
    if (const Entry* e = get("params.p")) p = parse_double(*e);
    if (const Entry* e = get("params.delta")) delta = parse_double(*e);
    cfg.params = SystemParams(r1, r2, g1, g2, p, delta);

    if (const Entry* e = get("initial")) {
        auto preset = initial_states::by_name(e->value);
        if (!preset) {
            throw ConfigError(e->line, e->value_column,
                              "unknown initial state '" + e->value + "'");
        }
        initial = preset->matrix();
    }
    auto set_real = [&](const char* key, int i, int j) {
        if (const Entry* e = get(key)) {
            const double v = parse_double(*e);
            initial(i, j) = complex(v, initial(i, j).imag());
            initial(j, i) = std::conj(initial(i, j));
        }
    };
    auto set_imag = [&](const char* key, int i, int j) {
        if (const Entry* e = get(key)) {
            const double v = parse_double(*e);
            initial(i, j) = complex(initial(i, j).real(), v);
            initial(j, i) = std::conj(initial(i, j));
        }
    };
    set_real("initial.aa", kA, kA);
    set_real("initial.bb", kB, kB);
    set_real("initial.cc", kC, kC);
    set_real("initial.ab_re", kA, kB);
    set_imag("initial.ab_im", kA, kB);
    set_real("initial.ac_re", kA, kC);
    set_imag("initial.ac_im", kA, kC);
    set_real("initial.bc_re", kB, kC);
    set_imag("initial.bc_im", kB, kC);
    cfg.initial = DensityMatrix::from_matrix(initial);
    if (cfg.initial.min_eigenvalue() < -1e-9) {
        throw ValidationError("initial density matrix must be positive semidefinite (min eigenvalue " +
                              std::to_string(cfg.initial.min_eigenvalue()) + ")");
    }
    cfg.initial_label = preset_label(cfg.initial);

    IntegratorConfig& ic = cfg.integrator;
    if (const Entry* e = get("integrator.method")) {
        if (e->value == "rk4") {
            ic.method = Method::FixedRK4;
        } else if (e->value == "rk45") {
            ic.method = Method::AdaptiveRK45;
        } else {
            throw ConfigError(e->line, e->value_column,
                              "integrator.method must be rk4 or rk45, got '" + e->value + "'");
        }
    }
    if (const Entry* e = get("integrator.step")) ic.step = parse_double(*e);
    if (const Entry* e = get("integrator.abs_tol")) ic.abs_tol = parse_double(*e);
    if (const Entry* e = get("integrator.rel_tol")) ic.rel_tol = parse_double(*e);
    if (const Entry* e = get("integrator.horizon")) ic.horizon = parse_double(*e);
    if (const Entry* e = get("integrator.convergence_tol")) {
        ic.convergence_norm_tol = parse_double(*e);
    }
    if (const Entry* e = get("integrator.sample_stride")) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
        if (ec != std::errc() || ptr != e->value.data() + e->value.size()) {
            throw ConfigError(e->line, e->value_column, "expected an integer");
        }
        ic.sample_stride = v;
    }
    if (const Entry* e = get("integrator.stop_at_convergence")) {
        ic.stop_at_convergence = parse_bool(*e);
    }
    ic.validate();

    if (const Entry* e = get("output.dir")) cfg.output.dir = e->value;
    if (const Entry* e = get("output.csv")) cfg.output.csv = e->value;
    if (const Entry* e = get("output.json")) cfg.output.json = e->value;

    if (const Entry* e = get("sweep.r1")) cfg.sweep.r1 = parse_list(*e);
    if (const Entry* e = get("sweep.r2")) cfg.sweep.r2 = parse_list(*e);
    if (const Entry* e = get("sweep.gamma1")) cfg.sweep.gamma1 = parse_list(*e);
    if (const Entry* e = get("sweep.gamma2")) cfg.sweep.gamma2 = parse_list(*e);
    (void)cfg.sweep_grid(); // validates every grid point

    if (const Entry* e = get("dressed.r1")) cfg.dressed_r1 = parse_double(*e);
    if (const Entry* e = get("dressed.r2")) cfg.dressed_r2 = parse_double(*e);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(0, 0, "cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "command = " << to_string(c.command) << '\n';
    if (c.scenario) os << "scenario = " << *c.scenario << '\n';

    os << "params.r1 = " << fmt(c.params.r1()) << '\n'
       << "params.r2 = " << fmt(c.params.r2()) << '\n'
       << "params.gamma1 = " << fmt(c.params.gamma1()) << '\n'
       << "params.gamma2 = " << fmt(c.params.gamma2()) << '\n'
       << "params.p = " << fmt(c.params.p()) << '\n'
       << "params.delta = " << fmt(c.params.delta()) << '\n';

    if (c.initial_label != "explicit") {
        os << "initial = " << c.initial_label << '\n';
    } else {
        const Matrix3c& m = c.initial.matrix();
        os << "initial.aa = " << fmt(m(kA, kA).real()) << '\n'
           << "initial.bb = " << fmt(m(kB, kB).real()) << '\n'
           << "initial.cc = " << fmt(m(kC, kC).real()) << '\n'
           << "initial.ab_re = " << fmt(m(kA, kB).real()) << '\n'
           << "initial.ab_im = " << fmt(m(kA, kB).imag()) << '\n'
           << "initial.ac_re = " << fmt(m(kA, kC).real()) << '\n'
           << "initial.ac_im = " << fmt(m(kA, kC).imag()) << '\n'
           << "initial.bc_re = " << fmt(m(kB, kC).real()) << '\n'
           << "initial.bc_im = " << fmt(m(kB, kC).imag()) << '\n';
    }

    const IntegratorConfig& ic = c.integrator;
    os << "integrator.method = " << to_string(ic.method) << '\n'
       << "integrator.step = " << fmt(ic.step) << '\n'
       << "integrator.abs_tol = " << fmt(ic.abs_tol) << '\n'
       << "integrator.rel_tol = " << fmt(ic.rel_tol) << '\n'
       << "integrator.horizon = " << fmt(ic.horizon) << '\n'
       << "integrator.convergence_tol = " << fmt(ic.convergence_norm_tol) << '\n'
       << "integrator.sample_stride = " << ic.sample_stride << '\n'
       << "integrator.stop_at_convergence = " << (ic.stop_at_convergence ? "true" : "false")
       << '\n';

    os << "output.dir = " << c.output.dir << '\n'
       << "output.csv = " << c.output.csv << '\n'
       << "output.json = " << c.output.json << '\n';

    if (!c.sweep.r1.empty()) os << "sweep.r1 = " << fmt_list(c.sweep.r1) << '\n';
    if (!c.sweep.r2.empty()) os << "sweep.r2 = " << fmt_list(c.sweep.r2) << '\n';
    if (!c.sweep.gamma1.empty()) os << "sweep.gamma1 = " << fmt_list(c.sweep.gamma1) << '\n';
    if (!c.sweep.gamma2.empty()) os << "sweep.gamma2 = " << fmt_list(c.sweep.gamma2) << '\n';
    if (c.dressed_r1) os << "dressed.r1 = " << fmt(*c.dressed_r1) << '\n';
    if (c.dressed_r2) os << "dressed.r2 = " << fmt(*c.dressed_r2) << '\n';
    return os.str();
}

} // namespace lambda_cpt
