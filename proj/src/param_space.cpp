#include "aodvtune/param_space.hpp"

#include "aodvtune/error.hpp"
#include "aodvtune/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aodvtune {

Genome Genome::from_values(std::span<const double> values) {
    if (values.size() != kGeneCount)
        throw ConfigError("genome needs " + std::to_string(kGeneCount) + " values, got " +
                          std::to_string(values.size()));
    Genome g;
    std::copy(values.begin(), values.end(), g.values.begin());
    return g;
}

const ParamSpace& ParamSpace::aodv() {
    static const ParamSpace space({{
        {"HELLO_INTERVAL", GeneKind::real, 1.0, 20.0, 1.0},
        {"ACTIVE_ROUTE_TIMEOUT", GeneKind::real, 1.0, 20.0, 3.0},
        {"MY_ROUTE_TIMEOUT", GeneKind::real, 1.0, 40.0, 6.0},
        {"NODE_TRAVERSAL_TIME", GeneKind::real, 0.01, 15.0, 0.040},
        {"MAX_RREQ_TIMEOUT", GeneKind::real, 1.0, 100.0, 10.0},
        {"NET_DIAMETER", GeneKind::integer, 3, 100, 35},
        {"ALLOWED_HELLO_LOSS", GeneKind::integer, 0, 20, 2},
        {"RREQ_RETRIES", GeneKind::integer, 0, 20, 2},
        {"TTL_START", GeneKind::integer, 1, 40, 1},
        {"TTL_INCREMENT", GeneKind::integer, 1, 20, 2},
        {"TTL_THRESHOLD", GeneKind::integer, 1, 60, 7},
    }});
    return space;
}

std::size_t ParamSpace::index_of(std::string_view name) const {
    if (name == "REQ_RETRIES") return kRreqRetries;
    for (std::size_t i = 0; i < genes_.size(); ++i)
        if (genes_[i].name == name) return i;
    throw ConfigError("unknown AODV parameter '" + std::string(name) + "'");
}

Genome ParamSpace::rfc_default() const {
    Genome g;
    for (std::size_t i = 0; i < genes_.size(); ++i) g[i] = genes_[i].rfc_default;
    return g;
}

double ParamSpace::repair_gene(std::size_t i, double v) const {
    const auto& spec = genes_[i];
    if (std::isnan(v)) v = spec.rfc_default;
    if (spec.kind == GeneKind::integer) v = std::round(v);
    return std::clamp(v, spec.lower, spec.upper);
}

Genome ParamSpace::repair(const Genome& g) const {
    Genome out;
    for (std::size_t i = 0; i < genes_.size(); ++i) out[i] = repair_gene(i, g[i]);
    return out;
}

std::vector<Violation> ParamSpace::validate(const Genome& g) const {
    std::vector<Violation> out;
    for (std::size_t i = 0; i < genes_.size(); ++i) {
        const auto& spec = genes_[i];
        const double v = g[i];
        std::string name(spec.name);
        if (std::isnan(v)) {
            out.push_back({i, name + " is NaN"});
            continue;
        }
        if (v < spec.lower || v > spec.upper)
            out.push_back({i, name + " = " + format_double(v) + " outside [" +
                                  format_double(spec.lower) + ", " + format_double(spec.upper) + "]"});
        if (spec.kind == GeneKind::integer && std::round(v) != v)
            out.push_back({i, name + " = " + format_double(v) + " is not an integer"});
    }
    return out;
}

std::string genome_csv_header(const ParamSpace& space) {
    std::string s;
    for (const auto& g : space.genes()) {
        if (!s.empty()) s += ',';
        s += g.name;
    }
    return s;
}

std::string genome_to_csv(const Genome& g) {
    std::string s;
    for (std::size_t i = 0; i < kGeneCount; ++i) {
        if (i) s += ',';
        s += format_double(g[i]);
    }
    return s;
}

Genome genome_from_csv(std::string_view row) {
    auto fields = split(trim(row), ',');
    std::vector<double> values;
    values.reserve(fields.size());
    for (auto f : fields) values.push_back(parse_double(f));
    return Genome::from_values(values);
}

std::string genome_to_keyed_text(const Genome& g, const ParamSpace& space) {
    std::string s;
    for (std::size_t i = 0; i < space.size(); ++i) {
        s += space.gene(i).name;
        s += '=';
        s += format_double(g[i]);
        s += '\n';
    }
    return s;
}

Genome genome_from_keyed_text(std::string_view text, const ParamSpace& space) {
    Genome g = space.rfc_default();
    for (const auto& e : parse_keyed_text(text)) {
        std::size_t idx = 0;
        try {
            idx = space.index_of(e.key);
        } catch (const ConfigError& err) {
            throw ParseError(err.what(), e.line);
        }
        try {
            g[idx] = parse_double(e.value);
        } catch (const ParseError& err) {
            throw ParseError(err.what(), e.line);
        }
    }
    return g;
}

Genome load_genome(const std::string& path, const ParamSpace& space) {
    const std::string text = read_file(path);
    if (text.find('=') != std::string::npos) return genome_from_keyed_text(text, space);
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty() || t.front() == '#' || t.rfind(space.gene(0).name, 0) == 0) continue;
        try {
            return genome_from_csv(t);
        } catch (const std::exception& err) {
            throw ParseError(err.what(), line_no);
        }
    }
    throw ParseError("no genome found in '" + path + "'");
}

} // namespace aodvtune
