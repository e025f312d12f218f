#ifndef BIPHOTON_IO_HPP
#define BIPHOTON_IO_HPP

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "biphoton/errors.hpp"
#include "biphoton/fit.hpp"
#include "biphoton/params.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/spectral.hpp"
#include "biphoton/sweep.hpp"

// Serialization: CSV for gridded data, JSON for structured results and the
// parameter config. All floating-point text is %.17g, enough to round-trip
// doubles exactly.

namespace biphoton {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- CSV ----

inline void write_matrix_csv(std::ostream& os, const SpectralMatrix& m) {
    os << "dws,dwi,re,im,abs\n";
    for (int j = 0; j < m.grid.n; ++j)
        for (int k = 0; k < m.grid.n; ++k) {
            const std::complex<double> v = m.f(j, k);
            os << fmt17(m.axis[j]) << ',' << fmt17(m.axis[k]) << ',' << fmt17(v.real()) << ','
               << fmt17(v.imag()) << ',' << fmt17(std::abs(v)) << '\n';
        }
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
    os << "axis_value,S,a,beta,a_ci95,beta_ci95,grid_n,range\n";
    for (const SweepRow& row : r.rows)
        os << fmt17(row.axis_value) << ',' << fmt17(row.S) << ',' << fmt17(row.a) << ','
           << fmt17(row.beta) << ',' << fmt17(row.a_ci95) << ',' << fmt17(row.beta_ci95) << ','
           << row.grid_n << ',' << fmt17(row.range) << '\n';
}

inline void write_series_csv(std::ostream& os, const EntropySeries& s) {
    os << "R,S\n";
    for (std::size_t k = 0; k < s.ranges.size(); ++k)
        os << fmt17(s.ranges[k]) << ',' << fmt17(s.entropy[k]) << '\n';
}

inline void write_mode_csv(std::ostream& os, const std::vector<double>& axis,
                           const std::vector<double>& abs2) {
    if (axis.size() != abs2.size()) throw contract_error("write_mode_csv: length mismatch");
    os << "omega,abs2\n";
    for (std::size_t j = 0; j < axis.size(); ++j)
        os << fmt17(axis[j]) << ',' << fmt17(abs2[j]) << '\n';
}

// R,S series reader for the fit subcommand; header line required.
inline void read_series_csv(std::istream& is, std::vector<double>& R, std::vector<double>& S) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("R,S", 0) != 0)
        throw config_error("series CSV must start with an R,S header");
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b))
            throw config_error("series CSV line " + std::to_string(lineno) + ": expected R,S");
        try {
            R.push_back(std::stod(a));
            S.push_back(std::stod(b));
        } catch (const std::exception&) {
            throw config_error("series CSV line " + std::to_string(lineno) +
                               ": not numeric: " + line);
        }
    }
}

// ---- JSON ----

inline nlohmann::json params_to_json(const PhysicalParams& p) {
    return {{"lambda_s", p.lambda_s},
            {"lambda_i", p.lambda_i},
            {"gamma3", p.gamma3},
            {"gamma3N_ratio", p.gamma3N_ratio},
            {"tau", p.tau},
            {"temperature", p.temperature},
            {"atom_mass", p.atom_mass},
            {"scheme", to_string(p.scheme)}};
}

inline Scheme scheme_from_string(const std::string& s) {
    if (s == "co" || s == "copropagating") return Scheme::Copropagating;
    if (s == "counter" || s == "counterpropagating") return Scheme::CounterPropagating;
    throw config_error("unknown scheme '" + s + "' (expected co|counter)");
}

// Strict parse: keys are exactly the physical parameter names; anything else
// is rejected so typos cannot silently fall back to defaults.
inline PhysicalParams params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw config_error("config must be a JSON object");
    PhysicalParams p;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "lambda_s")
                p.lambda_s = value.get<double>();
            else if (key == "lambda_i")
                p.lambda_i = value.get<double>();
            else if (key == "gamma3")
                p.gamma3 = value.get<double>();
            else if (key == "gamma3N_ratio")
                p.gamma3N_ratio = value.get<double>();
            else if (key == "tau")
                p.tau = value.get<double>();
            else if (key == "temperature")
                p.temperature = value.get<double>();
            else if (key == "atom_mass")
                p.atom_mass = value.get<double>();
            else if (key == "scheme")
                p.scheme = scheme_from_string(value.get<std::string>());
            else
                throw config_error("unknown config key '" + key + "'");
        } catch (const nlohmann::json::exception&) {
            throw config_error("config key '" + key + "' has the wrong type");
        }
    }
    return p;
}

inline PhysicalParams load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config file " + path + " is not valid JSON: " + e.what());
    }
    return params_from_json(j);
}

inline nlohmann::json matrix_to_json(const SpectralMatrix& m) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int j = 0; j < m.grid.n; ++j) {
        nlohmann::json rrow = nlohmann::json::array(), irow = nlohmann::json::array();
        for (int k = 0; k < m.grid.n; ++k) {
            rrow.push_back(m.f(j, k).real());
            irow.push_back(m.f(j, k).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return {{"grid", {{"range", m.grid.range}, {"n", m.grid.n}}},
            {"axis", m.axis},
            {"re", std::move(re)},
            {"im", std::move(im)}};
}

inline nlohmann::json schmidt_to_json(const SchmidtModes& modes) {
    return {{"lambdas", modes.lambdas},
            {"entropy_bits", entropy_bits(modes.lambdas)},
            {"modes_retained", modes.lambdas.size()}};
}

inline nlohmann::json fit_to_json(const FitResult& f) {
    return {{"a", f.a},
            {"beta", f.beta},
            {"a_ci95", f.a_ci95},
            {"beta_ci95", f.beta_ci95},
            {"iterations", f.iterations},
            {"rms_residual", f.rms_residual},
            {"ci_warning", f.ci_warning}};
}

inline nlohmann::json series_to_json(const EntropySeries& s) {
    return {{"R", s.ranges}, {"S", s.entropy}, {"grid_n", s.grid_n}};
}

inline nlohmann::json sweep_to_json(const SweepResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepRow& row : r.rows) {
        nlohmann::json jr = {{"axis_value", row.axis_value}, {"ok", row.ok},
                             {"S", row.S},                   {"a", row.a},
                             {"beta", row.beta},             {"a_ci95", row.a_ci95},
                             {"beta_ci95", row.beta_ci95},   {"grid_n", row.grid_n},
                             {"range", row.range}};
        if (!row.ok) jr["error"] = row.message;
        rows.push_back(std::move(jr));
    }
    return {{"axis", to_string(r.axis)}, {"mode", to_string(r.mode)}, {"rows", std::move(rows)}};
}

}

#endif
