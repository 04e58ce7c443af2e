#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gfc/errors.hpp"
#include "gfc/kernel.hpp"

namespace gfc {

// Kernel specification format: flat key = value lines ('#' starts a comment).
//
//   kind = power_law | mixture | distributed_order | measure
//   alpha = 0.5                        power_law
//   weights = 1, 1                     mixture
//   exponents = 0.5, 0.33333           mixture (same count as weights)
//   mu_nodes = 0:1, 1:1                distributed_order; breakpoints of a
//                                      piecewise-linear weight on [0,1];
//                                      a single bare value means a constant
//   measure_atoms = 1:1, 2:0.5         measure; location:mass pairs
//   density_nodes = 0.5:0.25           measure; quadrature part (optional)
//
// The inline form packs the same fields into one string separated by ';'.

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& field, const std::string& text) {
    std::string t = trim(text);
    try {
        size_t pos = 0;
        double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw input_error("kernel spec: field '" + field + "' has a malformed real '" +
                          t + "'");
    }
}

inline std::vector<double> parse_list(const std::string& field,
                                      const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(field, item));
    if (out.empty())
        throw input_error("kernel spec: field '" + field + "' is empty");
    return out;
}

inline std::vector<std::pair<double, double>> parse_pairs(
    const std::string& field, const std::string& text) {
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw input_error("kernel spec: field '" + field +
                              "' expects location:value pairs");
        out.emplace_back(parse_real(field, item.substr(0, colon)),
                         parse_real(field, item.substr(colon + 1)));
    }
    if (out.empty())
        throw input_error("kernel spec: field '" + field + "' is empty");
    return out;
}

inline std::map<std::string, std::string> parse_fields(const std::string& text,
                                                       char line_sep) {
    std::map<std::string, std::string> fields;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line, line_sep)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw input_error("kernel spec: expected 'key = value', got '" + line +
                              "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        static const char* known[] = {"kind",     "alpha",         "weights",
                                      "exponents", "mu_nodes",     "measure_atoms",
                                      "density_nodes"};
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                return key == k;
            }) == std::end(known))
            throw input_error("kernel spec: unknown field '" + key + "'");
        if (!fields.emplace(key, value).second)
            throw input_error("kernel spec: duplicate field '" + key + "'");
    }
    return fields;
}

inline KernelSymbol build_kernel(const std::map<std::string, std::string>& f) {
    auto at = [&](const std::string& key) -> const std::string& {
        auto it = f.find(key);
        if (it == f.end())
            throw input_error("kernel spec: missing field '" + key + "'");
        return it->second;
    };

    const std::string kind = trim(at("kind"));
    if (kind == "power_law") {
        double alpha = parse_real("alpha", at("alpha"));
        if (!(alpha > 0.0 && alpha < 1.0))
            throw input_error("kernel spec: field 'alpha' must lie in (0, 1)");
        return KernelSymbol::power_law(alpha);
    }
    if (kind == "mixture") {
        auto w = parse_list("weights", at("weights"));
        auto e = parse_list("exponents", at("exponents"));
        if (w.size() != e.size())
            throw input_error(
                "kernel spec: fields 'weights' and 'exponents' differ in length");
        std::vector<KernelSymbol::MixtureTerm> terms;
        for (size_t i = 0; i < w.size(); ++i) {
            if (!(w[i] > 0.0))
                throw input_error("kernel spec: field 'weights' must be > 0");
            if (!(e[i] > 0.0 && e[i] < 1.0))
                throw input_error(
                    "kernel spec: field 'exponents' must lie in (0, 1)");
            terms.push_back({w[i], e[i]});
        }
        return KernelSymbol::mixture(std::move(terms));
    }
    if (kind == "distributed_order") {
        const std::string& text = at("mu_nodes");
        if (text.find(':') == std::string::npos) {
            double c = parse_real("mu_nodes", text);
            if (!(c > 0.0))
                throw input_error("kernel spec: constant 'mu_nodes' must be > 0");
            return KernelSymbol::distributed_order([c](double) { return c; });
        }
        auto nodes = parse_pairs("mu_nodes", text);
        std::sort(nodes.begin(), nodes.end());
        for (const auto& n : nodes) {
            if (!(n.first >= 0.0 && n.first <= 1.0))
                throw input_error(
                    "kernel spec: 'mu_nodes' locations must lie in [0, 1]");
            if (!(n.second >= 0.0))
                throw input_error("kernel spec: 'mu_nodes' values must be >= 0");
        }
        auto mu = [nodes](double a) {
            if (a <= nodes.front().first) return nodes.front().second;
            if (a >= nodes.back().first) return nodes.back().second;
            for (size_t i = 1; i < nodes.size(); ++i)
                if (a <= nodes[i].first) {
                    double w = (a - nodes[i - 1].first) /
                               (nodes[i].first - nodes[i - 1].first);
                    return (1.0 - w) * nodes[i - 1].second + w * nodes[i].second;
                }
            return nodes.back().second;
        };
        return KernelSymbol::distributed_order(mu);
    }
    if (kind == "measure") {
        std::vector<StieltjesMeasure::Term> atoms, density;
        auto it = f.find("measure_atoms");
        if (it != f.end())
            for (auto [loc, mass] : parse_pairs("measure_atoms", it->second))
                atoms.push_back({loc, mass});
        it = f.find("density_nodes");
        if (it != f.end())
            for (auto [loc, w] : parse_pairs("density_nodes", it->second))
                density.push_back({loc, w});
        if (atoms.empty() && density.empty())
            throw input_error(
                "kernel spec: kind 'measure' needs 'measure_atoms' or "
                "'density_nodes'");
        return KernelSymbol::from_measure(
            StieltjesMeasure(std::move(atoms), std::move(density)));
    }
    throw input_error("kernel spec: field 'kind' has unknown value '" + kind + "'");
}

} // namespace detail

inline KernelSymbol parse_kernel_spec_text(const std::string& text) {
    return detail::build_kernel(detail::parse_fields(text, '\n'));
}

inline KernelSymbol parse_kernel_spec_inline(const std::string& text) {
    return detail::build_kernel(detail::parse_fields(text, ';'));
}

// Accepts either an inline spec (contains '=') or a path to a spec file.
inline KernelSymbol load_kernel_spec(const std::string& path_or_inline) {
    if (path_or_inline.find('=') != std::string::npos)
        return parse_kernel_spec_inline(path_or_inline);
    std::ifstream in(path_or_inline);
    if (!in)
        throw input_error("kernel spec: cannot open file '" + path_or_inline + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_kernel_spec_text(os.str());
}

} // namespace gfc
