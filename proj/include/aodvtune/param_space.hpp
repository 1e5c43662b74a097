#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aodvtune {

inline constexpr std::size_t kGeneCount = 11;

// Gene positions, frozen to the order of the AODV parameter table.
enum Gene : std::size_t {
    kHelloInterval = 0,
    kActiveRouteTimeout = 1,
    kMyRouteTimeout = 2,
    kNodeTraversalTime = 3,
    kMaxRreqTimeout = 4,
    kNetDiameter = 5,
    kAllowedHelloLoss = 6,
    kRreqRetries = 7,
    kTtlStart = 8,
    kTtlIncrement = 9,
    kTtlThreshold = 10,
};

enum class GeneKind { real, integer };

struct GeneSpec {
    std::string_view name;
    GeneKind kind;
    double lower;
    double upper;
    double rfc_default;

    double range() const { return upper - lower; }
};

// One candidate AODV configuration. Integer genes are stored as doubles and
// only become integral on repair().
struct Genome {
    std::array<double, kGeneCount> values{};

    // Throws ConfigError when values.size() != kGeneCount.
    static Genome from_values(std::span<const double> values);

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    bool operator==(const Genome&) const = default;
};

struct Violation {
    std::size_t gene;
    std::string message;
};

class ParamSpace {
public:
    // The 11-gene AODV space with RFC 3561 defaults.
    static const ParamSpace& aodv();

    std::span<const GeneSpec> genes() const { return genes_; }
    const GeneSpec& gene(std::size_t i) const { return genes_[i]; }
    std::size_t size() const { return genes_.size(); }

    // Index of a gene by name; also accepts REQ_RETRIES for RREQ_RETRIES.
    // Throws ConfigError for unknown names.
    std::size_t index_of(std::string_view name) const;

    Genome rfc_default() const;

    // Integer genes are rounded half away from zero, then every gene is clamped.
    Genome repair(const Genome& g) const;
    double repair_gene(std::size_t i, double v) const;

    // Empty result means the genome is valid (repair(g) == g).
    std::vector<Violation> validate(const Genome& g) const;
    bool is_valid(const Genome& g) const { return validate(g).empty(); }

private:
    explicit ParamSpace(std::array<GeneSpec, kGeneCount> genes) : genes_(genes) {}
    std::array<GeneSpec, kGeneCount> genes_;
};

// Serialization. CSV rows follow gene order; the keyed form is
// NAME=value, one per line.
std::string genome_csv_header(const ParamSpace& space);
std::string genome_to_csv(const Genome& g);
Genome genome_from_csv(std::string_view row);

std::string genome_to_keyed_text(const Genome& g, const ParamSpace& space);
// Missing keys keep their RFC default; unknown keys throw ParseError.
Genome genome_from_keyed_text(std::string_view text, const ParamSpace& space);
// Reads either form: a single CSV row (optionally preceded by the header) or
// keyed text.
Genome load_genome(const std::string& path, const ParamSpace& space);

} // namespace aodvtune
