#include "cfl/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace cfl {

namespace {

std::vector<Complex> polar_set(std::initializer_list<std::pair<double, double>> mod_arg) {
    std::vector<Complex> v;
    for (const auto& [m, a] : mod_arg) v.push_back(std::polar(m, a));
    return v;
}

}  // namespace

RunConfig RunConfig::defaults() {
    RunConfig c;
    const double pi = std::numbers::pi;
    c.lambda_sets["relations"] = polar_set({{0.55, pi / 4}, {0.55, 3 * pi / 4},
                                            {0.78, pi / 4}, {0.78, 3 * pi / 4},
                                            {1.05, pi / 4}, {1.05, 3 * pi / 4}});
    c.lambda_sets["global"] = polar_set({{0.5, pi / 6}, {0.5, pi / 3}, {0.5, 2 * pi / 3},
                                         {0.5, 5 * pi / 6}, {0.9, pi / 6}, {0.9, pi / 3},
                                         {0.9, 2 * pi / 3}, {0.9, 5 * pi / 6}});
    c.lambda_sets["born"] = polar_set({{0.6, pi / 4}, {1.0, 2 * pi / 3}, {0.45, 5 * pi / 6}});
    c.lambda_sets["symmetry"] =
        polar_set({{0.5, pi / 5}, {0.65, 2 * pi / 5}, {0.8, pi / 3}, {0.95, pi / 7},
                   {1.1, 3 * pi / 8}, {0.6, 2 * pi / 3}, {0.75, 5 * pi / 7},
                   {0.9, 7 * pi / 9}, {1.05, 5 * pi / 6}, {0.45, 3 * pi / 4}});
    c.lambda_sets["lax"] = polar_set({// five per domain, both argument components
                                      {0.9, pi / 5}, {1.3, pi / 3}, {2.0, pi / 8},
                                      {0.9, pi + pi / 5}, {1.5, pi + pi / 3},
                                      {0.3, pi / 5}, {0.5, pi / 3}, {0.62, pi / 8},
                                      {0.4, pi + pi / 4}, {0.55, pi + pi / 6},
                                      {0.3, pi - pi / 5}, {0.5, pi - pi / 3}, {0.62, 2 * pi - pi / 8},
                                      {0.4, 2 * pi - pi / 4}, {0.55, pi - pi / 6},
                                      {0.9, pi - pi / 5}, {1.3, pi - pi / 3}, {2.0, 2 * pi - pi / 8},
                                      {0.9, 2 * pi - pi / 4}, {1.5, pi - pi / 6}});
    c.lambda_sets["spectral"] = c.lambda_sets["relations"];

    c.tolerances = {
        {"algebra", 1e-10},      {"lax_plane_wave", 1e-10}, {"lax_negative", 1e-2},
        {"solver_order", 1.9},   {"solver_error", 1e-3},    {"det_mu", 1e-8},
        {"two_path", 1e-6},      {"symmetry", 1e-6},        {"relation", 1e-6},
        {"born_exponent", 1.8},  {"sn_oracle", 1e-8},       {"mn_match", 1e-6},
        {"jump", 1e-5},          {"cyclic", 1e-10},         {"global", 1e-5},
        {"residue", 1e-5},       {"winding", 1e-3},         {"rec_plane", 0.01},
        {"rec_gauss", 0.02},     {"decay_exponent", 0.2},   {"classify", 1.0},
    };
    return c;
}

double RunConfig::tol(const std::string& name) const {
    const auto it = tolerances.find(name);
    if (it == tolerances.end())
        throw std::invalid_argument("RunConfig: unknown tolerance '" + name + "'");
    return it->second;
}

const std::vector<Complex>& RunConfig::lambdas(const std::string& name) const {
    const auto it = lambda_sets.find(name);
    if (it == lambda_sets.end())
        throw std::invalid_argument("RunConfig: unknown lambda set '" + name + "'");
    return it->second;
}

void RunConfig::validate() const {
    if (scenario != "zero" && scenario != "plane_wave" && scenario != "gaussian" &&
        scenario != "file")
        throw ValidationError(0, "scenario must be one of zero|plane_wave|gaussian|file");
    if (nx < 16 || nt < 16) throw ValidationError(0, "nx and nt must be at least 16");
    if (L <= 0.0 || T_end <= 0.0) throw ValidationError(0, "L and T_end must be positive");
    if (scenario == "file" && profile_file.empty())
        throw ValidationError(0, "file scenario requires profile_file");
    if (pw_kappa == 0.0) throw ValidationError(0, "pw_kappa must be nonzero");
    if (reconstruction_sign != 1 && reconstruction_sign != -1)
        throw ValidationError(0, "reconstruction_sign must be +1 or -1");
    for (const auto& [name, tolv] : tolerances)
        if (!(tolv > 0.0)) throw ValidationError(0, "tolerance '" + name + "' must be positive");
    for (const auto& [name, set] : lambda_sets) {
        if (set.empty()) throw ValidationError(0, "lambda set '" + name + "' is empty");
        for (const auto& z : set)
            if (z == Complex{})
                throw ValidationError(0, "lambda set '" + name + "' contains lambda = 0");
    }
}

std::string format_complex(Complex z) {
    std::ostringstream os;
    os << std::setprecision(17) << "(" << z.real() << "," << z.imag() << ")";
    return os.str();
}

Complex parse_complex(const std::string& tok, int line) {
    if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')')
        throw ValidationError(line, "expected complex value '(re,im)', got '" + tok + "'");
    const auto comma = tok.find(',');
    if (comma == std::string::npos)
        throw ValidationError(line, "expected complex value '(re,im)', got '" + tok + "'");
    try {
        const double re = std::stod(tok.substr(1, comma - 1));
        const double im = std::stod(tok.substr(comma + 1, tok.size() - comma - 2));
        return {re, im};
    } catch (const std::exception&) {
        throw ValidationError(line, "malformed complex value '" + tok + "'");
    }
}

std::string RunConfig::canonical_text() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "cflkit-config-v1\n";
    os << "scenario = " << scenario << "\n";
    os << "L = " << L << "\n";
    os << "T_end = " << T_end << "\n";
    os << "nx = " << nx << "\n";
    os << "nt = " << nt << "\n";
    os << "seed = " << seed << "\n";
    os << "output_dir = " << output_dir << "\n";
    if (!profile_file.empty()) os << "profile_file = " << profile_file << "\n";
    os << "pw_a = " << format_complex(pw_a) << "\n";
    os << "pw_b = " << format_complex(pw_b) << "\n";
    os << "pw_kappa = " << pw_kappa << "\n";
    os << "amp_q = " << format_complex(amp_q) << "\n";
    os << "amp_r = " << format_complex(amp_r) << "\n";
    os << "beta = " << beta << "\n";
    os << "center = " << center << "\n";
    os << "reconstruction_sign = " << reconstruction_sign << "\n";
    os << "allow_truncated = " << (allow_truncated ? 1 : 0) << "\n";
    for (const auto& [name, set] : lambda_sets) {
        os << "lambda_set " << name << " =";
        for (const auto& z : set) os << " " << format_complex(z);
        os << "\n";
    }
    for (const auto& [name, tolv] : tolerances) os << "tolerance " << name << " = " << tolv << "\n";
    return os.str();
}

std::uint64_t RunConfig::digest() const {
    const std::string text = canonical_text();
    return fnv1a(std::span<const char>(text.data(), text.size()));
}

std::string RunConfig::digest_hex() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << digest();
    return os.str();
}

namespace {

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> toks;
    std::istringstream is(s);
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

double parse_double(const std::string& tok, int line) {
    try {
        size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(line, "malformed number '" + tok + "'");
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg = RunConfig::defaults();
    std::istringstream is(text);
    std::string line;
    int ln = 0;
    bool version_seen = false;
    while (std::getline(is, line)) {
        ++ln;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (!version_seen) {
            if (toks.size() != 1 || toks[0] != "cflkit-config-v1")
                throw ValidationError(ln, "first line must be the schema version cflkit-config-v1");
            version_seen = true;
            continue;
        }
        if (toks[0] == "lambda_set") {
            if (toks.size() < 4 || toks[2] != "=")
                throw ValidationError(ln, "expected: lambda_set <name> = (re,im) ...");
            std::vector<Complex> set;
            for (size_t i = 3; i < toks.size(); ++i) set.push_back(parse_complex(toks[i], ln));
            cfg.lambda_sets[toks[1]] = std::move(set);
            continue;
        }
        if (toks[0] == "tolerance") {
            if (toks.size() != 4 || toks[2] != "=")
                throw ValidationError(ln, "expected: tolerance <name> = <value>");
            cfg.tolerances[toks[1]] = parse_double(toks[3], ln);
            continue;
        }
        if (toks.size() != 3 || toks[1] != "=")
            throw ValidationError(ln, "expected: <key> = <value>");
        const std::string& key = toks[0];
        const std::string& val = toks[2];
        if (key == "scenario") cfg.scenario = val;
        else if (key == "L") cfg.L = parse_double(val, ln);
        else if (key == "T_end") cfg.T_end = parse_double(val, ln);
        else if (key == "nx") cfg.nx = static_cast<int>(parse_double(val, ln));
        else if (key == "nt") cfg.nt = static_cast<int>(parse_double(val, ln));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(val, ln));
        else if (key == "output_dir") cfg.output_dir = val;
        else if (key == "profile_file") cfg.profile_file = val;
        else if (key == "pw_a") cfg.pw_a = parse_complex(val, ln);
        else if (key == "pw_b") cfg.pw_b = parse_complex(val, ln);
        else if (key == "pw_kappa") cfg.pw_kappa = parse_double(val, ln);
        else if (key == "amp_q") cfg.amp_q = parse_complex(val, ln);
        else if (key == "amp_r") cfg.amp_r = parse_complex(val, ln);
        else if (key == "beta") cfg.beta = parse_double(val, ln);
        else if (key == "center") cfg.center = parse_double(val, ln);
        else if (key == "reconstruction_sign")
            cfg.reconstruction_sign = static_cast<int>(parse_double(val, ln));
        else if (key == "allow_truncated")
            cfg.allow_truncated = parse_double(val, ln) != 0.0;
        else
            throw ValidationError(ln, "unknown key '" + key + "'");
    }
    if (!version_seen) throw ValidationError(0, "empty config (missing schema version)");
    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace cfl
