#include "countsim/analysis.hpp"

#include <fstream>

#include "countsim/svg.hpp"
#include "text_util.hpp"

namespace countsim {

namespace {

using detail::exact;
using detail::fixed6;
using detail::sig6;

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write analysis file: " + path.string());
    return out;
}

constexpr std::array<Skill, 2> kDistanceSkills = {Skill::CountPoint, Skill::Puppet};

std::string t_line(const std::string& label, const stats::TTestResult& t) {
    std::string line = "t " + label + " t(" + std::to_string(static_cast<long>(t.dof)) +
                       ")=" + fixed6(t.t) + " p=" + sig6(t.p);
    if (t.degenerate_variance) line += " degenerate_variance=1";
    return line + "\n";
}

} // namespace

DistanceReport distance_analysis(const RunConfig& cfg,
                                 std::span<const NetworkParams> params_per_seed,
                                 std::span<const std::uint64_t> seeds) {
    fatal_unless(params_per_seed.size() == seeds.size(), "distance_analysis: seed count mismatch");
    const GridGeometry geometry = cfg.geometry();
    const PostureTable table = PostureTable::make(cfg.posture_synthesis());
    const std::vector<Skill> skills(kDistanceSkills.begin(), kDistanceSkills.end());

    DistanceReport report;
    report.seeds.assign(seeds.begin(), seeds.end());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        Rng low_rng(derive_seed(seeds[i], stream::kAnalysis, 1));
        Rng high_rng(derive_seed(seeds[i], stream::kAnalysis, 2));
        const auto low_set =
            make_row_band_test_set(low_rng, cfg.test_batches, 0, 1, skills, cfg.hold_policy());
        const auto high_set =
            make_row_band_test_set(high_rng, cfg.test_batches, 3, 4, skills, cfg.hold_policy());
        const EvalResult low = evaluate(params_per_seed[i], low_set, table, geometry, 0);
        const EvalResult high = evaluate(params_per_seed[i], high_set, table, geometry, 0);
        for (Skill skill : kDistanceSkills) {
            report.by_skill[skill].low_accuracy.push_back(low.by_skill.at(skill).number_accuracy());
            report.by_skill[skill].high_accuracy.push_back(
                high.by_skill.at(skill).number_accuracy());
        }
    }
    for (auto& [skill, r] : report.by_skill)
        r.test = stats::two_sample_t(r.low_accuracy, r.high_accuracy, false);
    return report;
}

void write_distance_reports(const DistanceReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "distance.csv");
        out << "skill,seed,band,accuracy\n";
        for (const auto& [skill, r] : report.by_skill)
            for (std::size_t i = 0; i < report.seeds.size(); ++i) {
                out << skill_name(skill) << "," << report.seeds[i] << ",low,"
                    << exact(r.low_accuracy[i]) << "\n";
                out << skill_name(skill) << "," << report.seeds[i] << ",high,"
                    << exact(r.high_accuracy[i]) << "\n";
            }
    }
    {
        auto out = open_out(dir / "distance_stats.txt");
        for (const auto& [skill, r] : report.by_skill)
            out << t_line(std::string(skill_name(skill)) + " low vs high", r.test);
    }
    {
        std::vector<svg::Bar> bars;
        for (const auto& [skill, r] : report.by_skill) {
            const auto low = stats::mean_ci95(r.low_accuracy);
            const auto high = stats::mean_ci95(r.high_accuracy);
            bars.push_back(svg::Bar{std::string(skill_name(skill)) + " low", low.mean, low.ci_low,
                                    low.ci_high, low.ci_defined, "#2e7d32"});
            bars.push_back(svg::Bar{std::string(skill_name(skill)) + " high", high.mean,
                                    high.ci_low, high.ci_high, high.ci_defined, "#c62828"});
        }
        svg::write_bar_chart(dir / "distance.svg", "Counting accuracy by object distance",
                             "accuracy", bars);
    }
}

SetSizeReport set_size_analysis(std::span<const SeedStudyResult> results) {
    SetSizeReport report;
    std::vector<const SeedStudyResult*> ok;
    for (const SeedStudyResult& r : results)
        if (r.ok) ok.push_back(&r);
    fatal_unless(!ok.empty(), "set_size_analysis: no successful seeds");
    for (const SeedStudyResult* r : ok) report.seeds.push_back(r->seed);

    for (Skill skill : kCountingSkills) {
        SetSizeReport::PerSkill per;
        for (int n = 1; n <= 10; ++n) {
            std::vector<double> accs;
            for (const SeedStudyResult* r : ok) {
                const auto& by_n = r->record.final_eval().by_skill_numerosity;
                const auto it = by_n.find({skill, n});
                fatal_unless(it != by_n.end(), "set_size_analysis: missing numerosity tally");
                accs.push_back(it->second.number_accuracy());
            }
            per.per_numerosity[static_cast<std::size_t>(n - 1)] = stats::mean_ci95(accs);
        }
        for (const SeedStudyResult* r : ok) {
            const auto& by_n = r->record.final_eval().by_skill_numerosity;
            Tally small, large;
            for (int n = 1; n <= 10; ++n) {
                const Tally& t = by_n.at({skill, n});
                Tally& dst = n <= 5 ? small : large;
                dst.trials += t.trials;
                dst.number_ok += t.number_ok;
            }
            per.small_accuracy.push_back(small.number_accuracy());
            per.large_accuracy.push_back(large.number_accuracy());
        }
        per.test = stats::two_sample_t(per.small_accuracy, per.large_accuracy, false);
        report.by_skill[skill] = std::move(per);
    }
    return report;
}

void write_set_size_reports(const SetSizeReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "set_size.csv");
        out << "skill,seed,group,accuracy\n";
        for (const auto& [skill, r] : report.by_skill)
            for (std::size_t i = 0; i < report.seeds.size(); ++i) {
                out << skill_name(skill) << "," << report.seeds[i] << ",small,"
                    << exact(r.small_accuracy[i]) << "\n";
                out << skill_name(skill) << "," << report.seeds[i] << ",large,"
                    << exact(r.large_accuracy[i]) << "\n";
            }
    }
    {
        auto out = open_out(dir / "set_size_means.csv");
        out << "skill,numerosity,mean,ci_low,ci_high\n";
        for (const auto& [skill, r] : report.by_skill)
            for (int n = 1; n <= 10; ++n) {
                const auto& ci = r.per_numerosity[static_cast<std::size_t>(n - 1)];
                out << skill_name(skill) << "," << n << "," << fixed6(ci.mean) << ","
                    << fixed6(ci.ci_low) << "," << fixed6(ci.ci_high) << "\n";
            }
    }
    {
        auto out = open_out(dir / "set_size_stats.txt");
        for (const auto& [skill, r] : report.by_skill)
            out << t_line(std::string(skill_name(skill)) + " small vs large", r.test);
    }
    {
        std::vector<svg::Series> series;
        for (const auto& [skill, r] : report.by_skill) {
            svg::Series s;
            s.label = std::string(skill_name(skill));
            s.color = skill == Skill::CountPoint  ? "#2e7d32"
                      : skill == Skill::CountNoPoint ? "#c62828"
                                                     : "#1565c0";
            for (int n = 1; n <= 10; ++n)
                s.points.emplace_back(n, r.per_numerosity[static_cast<std::size_t>(n - 1)].mean);
            series.push_back(std::move(s));
        }
        svg::write_line_chart(dir / "set_size.svg", "Counting accuracy per set size",
                              "numerosity", "accuracy", series);
    }
    {
        std::vector<svg::Bar> bars;
        for (const auto& [skill, r] : report.by_skill) {
            const auto small = stats::mean_ci95(r.small_accuracy);
            const auto large = stats::mean_ci95(r.large_accuracy);
            bars.push_back(svg::Bar{std::string(skill_name(skill)) + " 1-5", small.mean,
                                    small.ci_low, small.ci_high, small.ci_defined, "#2e7d32"});
            bars.push_back(svg::Bar{std::string(skill_name(skill)) + " 6-10", large.mean,
                                    large.ci_low, large.ci_high, large.ci_defined, "#c62828"});
        }
        svg::write_bar_chart(dir / "set_size_groups.svg",
                             "Counting accuracy: small vs large sets", "accuracy", bars);
    }
}

} // namespace countsim
