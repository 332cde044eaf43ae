#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrlab/finite_product.hpp"
#include "corrlab/gaussian.hpp"
#include "corrlab/solid_cube.hpp"
#include "corrlab/zoo.hpp"

namespace corrlab::specs {

namespace detail {

inline std::map<std::string, std::string> parse_kv(const std::string& s, char sep) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("malformed key=value item: " + item);
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

inline double to_double(const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("malformed number: " + s);
    return v;
}

inline int to_int(const std::string& s) {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("malformed integer: " + s);
    return v;
}

inline std::vector<double> to_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) out.push_back(to_double(item));
    return out;
}

}  // namespace detail

// `uniform:m=<m>,n=<n>` | `pbiased:p=<p>,n=<n>` | inline JSON {omega, pi, n}
inline SpacePtr parse_space(const std::string& spec) {
    if (!spec.empty() && spec.front() == '{') {
        auto j = nlohmann::json::parse(spec);
        return std::make_shared<const FiniteSpace>(j.at("omega").get<std::vector<double>>(),
                                                   j.at("pi").get<std::vector<double>>(),
                                                   j.at("n").get<int>());
    }
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("malformed space spec: " + spec);
    std::string head = spec.substr(0, colon);
    auto kv = detail::parse_kv(spec.substr(colon + 1), ',');
    if (head == "uniform") return FiniteSpace::uniform(detail::to_int(kv.at("m")), detail::to_int(kv.at("n")));
    if (head == "pbiased") return FiniteSpace::p_biased(detail::to_double(kv.at("p")), detail::to_int(kv.at("n")));
    throw std::invalid_argument("unknown space spec: " + head);
}

inline zoo::BuiltinSpec parse_builtin(const std::string& body) {
    zoo::BuiltinSpec spec;
    auto qmark = body.find('?');
    std::string name = qmark == std::string::npos ? body : body.substr(0, qmark);
    spec.name = zoo::builtin_from_string(name);
    if (qmark != std::string::npos) {
        auto kv = detail::parse_kv(body.substr(qmark + 1), '&');
        if (kv.count("k")) spec.k = detail::to_int(kv.at("k"));
        if (kv.count("i")) spec.coordinate = detail::to_int(kv.at("i")) - 1;  // 1-based on the CLI
        if (kv.count("w")) spec.width = detail::to_int(kv.at("w"));
        if (kv.count("seed")) spec.seed = static_cast<std::uint64_t>(std::stoull(kv.at("seed")));
        if (kv.count("range"))
            spec.range = kv.at("range") == "pm1" ? zoo::OutputRange::pm_one : zoo::OutputRange::zero_one;
    }
    return spec;
}

// `builtin:<name>?k=..&i=..` | `@file.json` | inline JSON {values: [...]}
inline TabulatedFunction parse_function(const std::string& spec, const SpacePtr& space) {
    if (spec.rfind("builtin:", 0) == 0) return zoo::generate(parse_builtin(spec.substr(8)), space);
    nlohmann::json j;
    if (!spec.empty() && spec.front() == '@') {
        std::ifstream f(spec.substr(1));
        if (!f) throw std::invalid_argument("cannot open function file: " + spec.substr(1));
        f >> j;
    } else if (!spec.empty() && spec.front() == '{') {
        j = nlohmann::json::parse(spec);
    } else {
        throw std::invalid_argument("malformed function spec: " + spec);
    }
    if (j.contains("space")) {
        auto declared = parse_space(j.at("space").is_string() ? j.at("space").get<std::string>()
                                                              : j.at("space").dump());
        if (!declared->same_as(*space))
            throw std::invalid_argument("function file declares a different space than requested");
    }
    if (j.contains("builtin")) {
        std::string b = j.at("builtin").get<std::string>();
        std::string params;
        if (j.contains("params")) {
            for (auto& [k, v] : j.at("params").items()) {
                if (!params.empty()) params += '&';
                params += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
            }
        }
        return zoo::generate(parse_builtin(params.empty() ? b : b + "?" + params), space);
    }
    return TabulatedFunction(space, j.at("values").get<std::vector<double>>());
}

// `ball:r=<r>` | `box:a=<a1;a2;..>` | `slab:v=<v1;v2;..>,w=<w>` |
// `ellipsoid:A=<json file>` | `quasi:gauss-bump` | `cvx:abs1|norm|max2`
inline gaussian::BodyOracle parse_body(const std::string& spec, int dim) {
    auto colon = spec.find(':');
    std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "ball") {
        auto kv = detail::parse_kv(rest, ',');
        return gaussian::ball(detail::to_double(kv.at("r")), dim);
    }
    if (head == "box") {
        auto kv = detail::parse_kv(rest, ',');
        auto hw = detail::to_double_list(kv.at("a"));
        if (static_cast<int>(hw.size()) == 1) hw.assign(dim, hw[0]);
        if (static_cast<int>(hw.size()) != dim) throw std::invalid_argument("box: halfwidth count mismatch");
        return gaussian::box(std::move(hw));
    }
    if (head == "slab") {
        auto kv = detail::parse_kv(rest, ',');
        auto v = detail::to_double_list(kv.at("v"));
        if (static_cast<int>(v.size()) != dim) throw std::invalid_argument("slab: direction dimension mismatch");
        return gaussian::slab(std::move(v), detail::to_double(kv.at("w")));
    }
    if (head == "ellipsoid") {
        auto kv = detail::parse_kv(rest, ',');
        std::ifstream f(kv.at("A"));
        if (!f) throw std::invalid_argument("ellipsoid: cannot open matrix file");
        nlohmann::json j;
        f >> j;
        std::vector<double> a;
        for (const auto& row : j)
            for (const auto& x : row) a.push_back(x.get<double>());
        return gaussian::ellipsoid(std::move(a), dim);
    }
    if (head == "quasi" && rest == "gauss-bump") return gaussian::gauss_bump(dim);
    if (head == "cvx") {
        if (rest == "abs1") return gaussian::abs_coordinate(dim, 0);
        if (rest == "abs2") return gaussian::abs_coordinate(dim, 1);
        if (rest == "norm") return gaussian::scaled_norm(dim);
        if (rest == "max2") return gaussian::max_abs_two(dim);
    }
    throw std::invalid_argument("unknown body spec: " + spec);
}

// `coord:i` | `poly:c0;c1;..` | `cosbump` | `prodmono:<spec>|<spec>|..`
inline cube::SmoothFunctionOracle parse_cube_oracle(const std::string& spec, int dim, cube::Domain domain) {
    if (spec.rfind("coord:", 0) == 0)
        return cube::oracle_coordinate(dim, detail::to_int(spec.substr(6)) - 1, domain);
    if (spec.rfind("poly:", 0) == 0) return cube::oracle_poly(detail::to_double_list(spec.substr(5)), dim, domain);
    if (spec == "cosbump") return cube::oracle_cosbump(dim);
    if (spec.rfind("prodmono:", 0) == 0) {
        std::vector<std::function<double(double)>> factors;
        std::stringstream ss(spec.substr(9));
        std::string item;
        while (std::getline(ss, item, '|')) {
            if (item.rfind("poly:", 0) == 0) {
                auto c = detail::to_double_list(item.substr(5));
                factors.push_back([c](double x) {
                    double acc = 0.0;
                    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
                    return acc;
                });
            } else {
                throw std::invalid_argument("prodmono: unknown factor " + item);
            }
        }
        if (static_cast<int>(factors.size()) != dim) throw std::invalid_argument("prodmono: factor count mismatch");
        return cube::oracle_product_monotone(std::move(factors), domain);
    }
    throw std::invalid_argument("unknown cube oracle spec: " + spec);
}

}  // namespace corrlab::specs
