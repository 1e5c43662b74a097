#include "aodvtune/campaign.hpp"

#include "aodvtune/error.hpp"
#include "aodvtune/stats.hpp"
#include "aodvtune/text_format.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

namespace aodvtune {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string noise_name(NoiseMode m) { return m == NoiseMode::fresh ? "fresh" : "genome_hash"; }

std::string mode_name(Mode m) {
    switch (m) {
    case Mode::optimize: return "optimize";
    case Mode::evaluate: return "evaluate";
    case Mode::validate: return "validate";
    case Mode::compare: return "compare";
    }
    return "?";
}

std::string canonical_config(const CampaignConfig& c) {
    std::string s = "MODE=" + mode_name(c.mode) + "\nSEED=" + std::to_string(c.seed) +
                    "\nREPLICATIONS=" + std::to_string(c.replications) + "\nNOISE=" + noise_name(c.noise) +
                    "\nPDR_FLOOR=" + (c.weights.floor_rule == PdrFloorRule::degradation ? "degradation" : "literal") +
                    "\nMAX_DEGRADATION=" + format_double(c.weights.max_degradation) + "\n";
    if (c.mode == Mode::optimize) s += de_config_to_keyed_text(c.de);
    if (c.genome) s += "GENOME=" + genome_to_csv(*c.genome) + "\n";
    if (c.other_genome) s += "OTHER_GENOME=" + genome_to_csv(*c.other_genome) + "\n";
    for (const auto& sc : c.scenarios) s += "[scenario]\n" + scenario_to_keyed_text(sc);
    return s;
}

// Writes artifacts and remembers them for the manifest.
class ArtifactWriter {
public:
    ArtifactWriter(const CampaignConfig& c) : cfg_(c), dir_(c.out_dir), hash_(config_hash(c)) {
        if (dir_.empty()) throw ConfigError("an output directory is required (--out)");
        fs::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ConfigError("cannot write '" + path.string() + "'");
        f << content;
        if (!f) throw ConfigError("write failed for '" + path.string() + "'");
        ordered_json entry;
        entry["file"] = name;
        entry["fnv1a"] = hex64(fnv1a(content));
        entry["config_hash"] = hash_;
        artifacts_.push_back(std::move(entry));
    }

    void finish(ordered_json extra = ordered_json::object()) {
        ordered_json m;
        m["tool"] = "aodv-tune";
        m["mode"] = mode_name(cfg_.mode);
        m["seed"] = cfg_.seed;
        m["seed_source"] = cfg_.seed_from_entropy ? "entropy" : "flag";
        m["config_hash"] = hash_;
        m["replications"] = cfg_.replications;
        m["noise"] = noise_name(cfg_.noise);
        auto names = ordered_json::array();
        for (const auto& s : cfg_.scenarios) names.push_back(s.name);
        m["scenarios"] = names;
        if (cfg_.mode == Mode::optimize) {
            m["de"] = {{"pop_size", cfg_.de.pop_size},
                       {"generations", cfg_.de.generations},
                       {"mutation_factor", cfg_.de.mutation_factor},
                       {"crossover_prob", cfg_.de.crossover_prob},
                       {"blx_alpha", cfg_.de.blx_alpha},
                       {"crossover", crossover_name(cfg_.de.crossover)}};
        }
        for (auto& [k, v] : extra.items()) m[k] = v;
        m["artifacts"] = artifacts_;
        const fs::path path = dir_ / "manifest.json";
        std::ofstream f(path, std::ios::binary);
        f << m.dump(2) << '\n';
        if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    }

private:
    const CampaignConfig& cfg_;
    fs::path dir_;
    std::string hash_;
    ordered_json artifacts_ = ordered_json::array();
};

std::string replications_csv(const FitnessReport& r) {
    std::string s = sim_outcome_csv_header() + "\n";
    for (std::size_t i = 0; i < r.outcomes.size(); ++i)
        s += sim_outcome_to_csv(r.outcomes[i], i, i < r.seeds.size() ? r.seeds[i] : 0) + "\n";
    return s;
}

EvalConfig eval_config(const CampaignConfig& c, const ScenarioSpec& s) {
    EvalConfig e;
    e.replications = c.replications;
    e.parallelism = c.parallelism;
    e.base_seed = c.seed;
    e.noise = c.noise;
    e.scenario = PreparedScenario::make(s);
    return e;
}

std::string format_or_nan(double v) { return std::isnan(v) ? "nan" : format_double(v); }

double safe_ks_p(const stats::SampleSet& s) {
    try {
        return stats::ks_normality(s).p_value;
    } catch (const std::invalid_argument&) {
        return kNaN;
    }
}

stats::TestResult safe_kw(const std::vector<stats::SampleSet>& groups) {
    bool small = false;
    for (const auto& g : groups) small = small || g.values.size() < 5;
    if (small) {
        try {
            return stats::kruskal_wallis_exact(groups);
        } catch (const std::invalid_argument&) {
        }
    }
    return stats::kruskal_wallis(groups);
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const EvaluationError& e) {
        err << "error: " << e.what() << "\n  genome: " << genome_to_csv(e.genome()) << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

int check_genome(const Genome& g, std::ostream& err) {
    auto violations = ParamSpace::aodv().validate(g);
    if (violations.empty()) return 0;
    err << "error: invalid genome\n";
    for (const auto& v : violations) err << "  gene " << v.gene << ": " << v.message << '\n';
    return 2;
}

int run_comparison(const CampaignConfig& c, const Genome& a, const Genome& b, const std::string& label_a,
                   const std::string& label_b, std::ostream& out) {
    if (c.scenarios.empty()) throw ConfigError("at least one scenario is required");
    ArtifactWriter writer(c);
    const auto& space = ParamSpace::aodv();

    std::string long_csv = comparison_csv_header() + "\n";
    std::string summary =
        "scenario,energy_" + label_a + ",energy_" + label_b + ",energy_delta_pct,pdr_" + label_a + ",pdr_" +
        label_b + ",pdr_delta_points,pdr_delta_rel_pct,fitness_" + label_a + ",fitness_" + label_b +
        ",energy_kw_p,pdr_kw_p\n";

    for (const auto& sc : c.scenarios) {
        MonteCarloEvaluator mce(eval_config(c, sc), c.weights);
        const auto [refs, baseline] = mce.evaluate_baseline();
        const Genome rfc = space.rfc_default();
        const FitnessReport ra = a == rfc ? baseline : mce.evaluate(a);
        const FitnessReport rb = b == rfc ? baseline : mce.evaluate(b);

        const auto rows = compare_reports(sc.name, ra, rb, refs, c.weights);
        for (const auto& r : rows) long_csv += comparison_to_csv(r) + "\n";

        const double pdr_rel = rb.mean_pdr > 0 ? (ra.mean_pdr - rb.mean_pdr) / rb.mean_pdr * 100.0 : kNaN;
        summary += sc.name + "," + format_double(ra.mean_energy) + "," + format_double(rb.mean_energy) + "," +
                   format_or_nan(rows[0].delta_pct) + "," + format_double(ra.mean_pdr) + "," +
                   format_double(rb.mean_pdr) + "," + format_or_nan(rows[1].delta_pct) + "," +
                   format_or_nan(pdr_rel) + "," + format_double(ra.fitness) + "," + format_double(rb.fitness) +
                   "," + format_or_nan(rows[0].kw_p) + "," + format_or_nan(rows[1].kw_p) + "\n";

        writer.write("report_" + sc.name + "_" + label_a + ".json", report_to_json(ra));
        writer.write("report_" + sc.name + "_" + label_b + ".json", report_to_json(rb));

        out << sc.name << ": energy " << format_double(ra.mean_energy) << " vs " << format_double(rb.mean_energy)
            << " (" << format_or_nan(rows[0].delta_pct) << "% saved), pdr " << format_double(ra.mean_pdr) << " vs "
            << format_double(rb.mean_pdr) << ", KW p(energy) " << format_or_nan(rows[0].kw_p) << '\n';
    }
    writer.write("validation.csv", long_csv);
    writer.write("validation_summary.csv", summary);
    ordered_json extra;
    extra["genome_" + label_a] = genome_to_csv(a);
    extra["genome_" + label_b] = genome_to_csv(b);
    writer.finish(extra);
    return 0;
}

} // namespace

std::string config_hash(const CampaignConfig& c) { return hex64(fnv1a(canonical_config(c))); }

std::vector<MetricComparison> compare_reports(const std::string& scenario, const FitnessReport& a,
                                              const FitnessReport& b, const ReferenceValues& refs,
                                              const FitnessWeights& w) {
    auto per_rep_fitness = [&](const FitnessReport& r) {
        std::vector<double> f;
        for (const auto& o : r.outcomes) {
            const bool pen = o.pdr < pdr_floor(refs, w);
            f.push_back(pen ? penalized_fitness(o.energy_joules, o.pdr, refs, w)
                            : fitness(o.energy_joules, o.pdr, refs, w));
        }
        return f;
    };
    auto column = [](const FitnessReport& r, bool energy) {
        std::vector<double> v;
        for (const auto& o : r.outcomes) v.push_back(energy ? o.energy_joules : o.pdr);
        return v;
    };

    struct Metric {
        const char* name;
        std::vector<double> va, vb;
        double ma, mb, delta;
    };
    std::vector<Metric> metrics;
    metrics.push_back({"energy", column(a, true), column(b, true), a.mean_energy, b.mean_energy,
                       b.mean_energy > 0 ? (b.mean_energy - a.mean_energy) / b.mean_energy * 100.0 : kNaN});
    metrics.push_back({"pdr", column(a, false), column(b, false), a.mean_pdr, b.mean_pdr,
                       (a.mean_pdr - b.mean_pdr) * 100.0});
    metrics.push_back({"fitness", per_rep_fitness(a), per_rep_fitness(b), a.fitness, b.fitness,
                       b.fitness != 0 ? (b.fitness - a.fitness) / std::abs(b.fitness) * 100.0 : kNaN});

    std::vector<MetricComparison> rows;
    for (auto& m : metrics) {
        stats::SampleSet sa{"a", m.va}, sb{"b", m.vb};
        MetricComparison row{scenario, m.name, m.ma, m.mb, m.delta, safe_ks_p(sa), safe_ks_p(sb), kNaN, kNaN, false};
        if (sa.values.size() >= 3 && sb.values.size() >= 3) {
            const auto kw = safe_kw({sa, sb});
            row.kw_h = kw.statistic;
            row.kw_p = kw.p_value;
            row.reject_at_95 = kw.reject_at_95;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string comparison_csv_header() {
    return "scenario,metric,mean_a,mean_b,delta_pct,ks_p_a,ks_p_b,kw_h,kw_p,reject_at_95";
}

std::string comparison_to_csv(const MetricComparison& m) {
    return m.scenario + "," + m.metric + "," + format_double(m.mean_a) + "," + format_double(m.mean_b) + "," +
           format_or_nan(m.delta_pct) + "," + format_or_nan(m.ks_p_a) + "," + format_or_nan(m.ks_p_b) + "," +
           format_or_nan(m.kw_h) + "," + format_or_nan(m.kw_p) + "," + (m.reject_at_95 ? "true" : "false");
}

int cmd_optimize(const CampaignConfig& c, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (c.scenarios.size() != 1) throw ConfigError("optimize trains on exactly one scenario");
        const auto& space = ParamSpace::aodv();
        ArtifactWriter writer(c);

        MonteCarloEvaluator mce(eval_config(c, c.scenarios.front()), c.weights);
        const auto [refs, baseline] = mce.evaluate_baseline();
        out << "baseline " << c.scenarios.front().name << ": E_RFC=" << format_double(refs.energy)
            << " PDR_RFC=" << format_double(refs.pdr) << " fitness=" << format_double(baseline.fitness) << '\n';

        DEConfig de = c.de;
        de.base_seed = c.seed;
        const OptimizationResult result = run(space, de, mce.as_evaluator(), [&](const GenerationLog& g) {
            out << "generation " << g.generation << ": best " << format_double(g.best_fitness) << " mean "
                << format_double(g.mean_fitness) << '\n';
        });

        writer.write("baseline_report.json", report_to_json(baseline));
        writer.write("best_genome.txt", genome_to_keyed_text(result.best, space));
        writer.write("best_genome.csv", genome_csv_header(space) + "\n" + genome_to_csv(result.best) + "\n");
        writer.write("generations.csv", generation_log_csv(result.log, space));
        writer.write("best_report.json", report_to_json(result.best_report));
        writer.write("best_replications.csv", replications_csv(result.best_report));

        ordered_json extra;
        extra["rfc_energy"] = refs.energy;
        extra["rfc_pdr"] = refs.pdr;
        extra["rfc_fitness"] = baseline.fitness;
        extra["best_fitness"] = result.best_report.fitness;
        extra["generations_run"] = result.log.size() - 1;
        extra["optimizer_replications"] = result.total_replications;
        extra["baseline_replications"] = baseline.outcomes.size();
        writer.finish(extra);

        out << "best fitness " << format_double(result.best_report.fitness) << " (RFC "
            << format_double(baseline.fitness) << "), energy " << format_double(result.best_report.mean_energy)
            << ", pdr " << format_double(result.best_report.mean_pdr) << '\n';
        return 0;
    });
}

int cmd_evaluate(const CampaignConfig& c, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Genome g = c.genome.value_or(ParamSpace::aodv().rfc_default());
        if (int rc = check_genome(g, err)) return rc;
        if (c.scenarios.empty()) throw ConfigError("at least one scenario is required");
        std::optional<ArtifactWriter> writer;
        if (!c.out_dir.empty()) writer.emplace(c);
        for (const auto& sc : c.scenarios) {
            MonteCarloEvaluator mce(eval_config(c, sc), c.weights);
            const FitnessReport r = mce.evaluate(g);
            out << report_to_json(r);
            if (writer) {
                writer->write("evaluation_" + sc.name + ".json", report_to_json(r));
                writer->write("evaluation_" + sc.name + "_replications.csv", replications_csv(r));
            }
        }
        if (writer) {
            ordered_json extra;
            extra["genome"] = genome_to_csv(g);
            writer->finish(extra);
        }
        return 0;
    });
}

int cmd_validate(const CampaignConfig& c, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!c.genome) throw ConfigError("validate needs the tuned genome (--genome)");
        if (int rc = check_genome(*c.genome, err)) return rc;
        return run_comparison(c, *c.genome, ParamSpace::aodv().rfc_default(), "de", "rfc", out);
    });
}

int cmd_compare(const CampaignConfig& c, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!c.genome) throw ConfigError("compare needs --genome");
        const Genome b = c.other_genome.value_or(ParamSpace::aodv().rfc_default());
        if (int rc = check_genome(*c.genome, err)) return rc;
        if (int rc = check_genome(b, err)) return rc;
        return run_comparison(c, *c.genome, b, "a", "b", out);
    });
}

} // namespace aodvtune
