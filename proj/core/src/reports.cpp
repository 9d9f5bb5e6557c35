#include "countsim/reports.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "countsim/svg.hpp"
#include "text_util.hpp"

namespace countsim {

namespace {

using detail::exact;
using detail::fixed6;
using detail::sig6;

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report file: " + path.string());
    return out;
}

std::vector<const SeedStudyResult*> ok_results(std::span<const SeedStudyResult> results) {
    std::vector<const SeedStudyResult*> ok;
    for (const SeedStudyResult& r : results)
        if (r.ok) ok.push_back(&r);
    return ok;
}

const char* skill_color(Skill skill) {
    switch (skill) {
    case Skill::CountPoint: return "#2e7d32";
    case Skill::CountNoPoint: return "#c62828";
    case Skill::Puppet: return "#1565c0";
    default: return "#616161";
    }
}

} // namespace

ConditionTable condition_table(std::span<const SeedStudyResult> results) {
    ConditionTable table;
    for (const SeedStudyResult* r : ok_results(results)) {
        const EvalResult& ev = r->record.final_eval();
        for (Skill skill : kCountingSkills) {
            const auto it = ev.by_skill.find(skill);
            fatal_unless(it != ev.by_skill.end(), "condition_table: skill missing from eval");
            table[skill].push_back(it->second.number_accuracy());
        }
    }
    return table;
}

std::string study_stats_text(const ConditionTable& table) {
    std::vector<std::vector<double>> groups;
    std::vector<std::string> names;
    for (Skill skill : kCountingSkills) {
        const auto it = table.find(skill);
        if (it == table.end()) throw std::runtime_error("study_stats_text: missing condition");
        groups.push_back(it->second);
        names.emplace_back(skill_name(skill));
    }

    std::ostringstream out;
    const auto anova = stats::one_way_anova(groups);
    out << "anova conditions=" << names[0] << "," << names[1] << "," << names[2] << " F("
        << static_cast<long>(anova.dof_between) << "," << static_cast<long>(anova.dof_within)
        << ")=" << fixed6(anova.f) << " p=" << sig6(anova.p);
    if (anova.degenerate_variance) out << " degenerate_variance=1";
    out << "\n";
    for (const auto& pair : stats::tukey_hsd(groups)) {
        out << "tukey " << names[static_cast<std::size_t>(pair.a)] << " vs "
            << names[static_cast<std::size_t>(pair.b)] << " q=" << fixed6(pair.q)
            << " p=" << sig6(pair.p);
        if (pair.degenerate_variance) out << " degenerate_variance=1";
        out << "\n";
    }
    return out.str();
}

ConditionTable read_conditions_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open conditions csv: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "skill,seed,accuracy")
        throw std::runtime_error("bad conditions csv header in " + path.string());
    ConditionTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string skill_str, seed_str, acc_str;
        if (!std::getline(ss, skill_str, ',') || !std::getline(ss, seed_str, ',') ||
            !std::getline(ss, acc_str))
            throw std::runtime_error("bad conditions csv row: " + line);
        const auto skill = skill_by_name(skill_str);
        if (!skill) throw std::runtime_error("unknown skill in conditions csv: " + skill_str);
        table[*skill].push_back(std::stod(acc_str));
    }
    return table;
}

void write_study_reports(const RunConfig& cfg, int study_id,
                         std::span<const SeedStudyResult> results,
                         const std::filesystem::path& dir) {
    const auto ok = ok_results(results);
    if (ok.size() < 3)
        throw std::runtime_error("study aggregate: fewer than 3 seeds succeeded (" +
                                 std::to_string(ok.size()) + ")");
    std::filesystem::create_directories(dir);

    // Per-seed final counting accuracy.
    {
        auto out = open_out(dir / "conditions.csv");
        out << "skill,seed,accuracy\n";
        for (Skill skill : kCountingSkills)
            for (const SeedStudyResult* r : ok) {
                const auto& tally = r->record.final_eval().by_skill.at(skill);
                out << skill_name(skill) << "," << r->seed << "," << exact(tally.number_accuracy())
                    << "\n";
            }
    }

    // Per-seed final tallies by skill and numerosity (set-size source data).
    for (const SeedStudyResult* r : ok) {
        auto out = open_out(dir / ("final_eval_seed" + std::to_string(r->seed) + ".csv"));
        out << "skill,numerosity,trials,number_correct,gesture_correct,number_steps_correct,"
               "gesture_steps_correct\n";
        for (const auto& [key, tally] : r->record.final_eval().by_skill_numerosity)
            out << skill_name(key.first) << "," << key.second << "," << tally.trials << ","
                << tally.number_ok << "," << tally.gesture_ok << "," << tally.number_steps_ok
                << "," << tally.gesture_steps_ok << "\n";
    }

    // Mean accuracy curves with 95% CI across seeds, for the counting skills.
    const std::vector<int> iterations = [&] {
        std::vector<int> its;
        for (const EvalResult& ev : ok.front()->record.evals) its.push_back(ev.iteration);
        return its;
    }();
    auto curve_rows = [&](bool gesture_head) {
        std::vector<std::tuple<int, Skill, stats::MeanCi>> rows;
        for (std::size_t ei = 0; ei < iterations.size(); ++ei)
            for (Skill skill : kCountingSkills) {
                std::vector<double> accs;
                for (const SeedStudyResult* r : ok) {
                    fatal_unless(ei < r->record.evals.size(),
                                 "study reports: evaluation grids differ between seeds");
                    const auto& tally = r->record.evals[ei].by_skill.at(skill);
                    accs.push_back(gesture_head ? tally.gesture_accuracy()
                                                : tally.number_accuracy());
                }
                rows.emplace_back(iterations[ei], skill, stats::mean_ci95(accs));
            }
        return rows;
    };
    {
        auto out = open_out(dir / "curves.csv");
        auto dat = open_out(dir / "curves.dat");
        out << "iteration,skill,mean,ci_low,ci_high\n";
        dat << "# iteration skill mean ci_low ci_high\n";
        for (const auto& [it, skill, ci] : curve_rows(false)) {
            out << it << "," << skill_name(skill) << "," << fixed6(ci.mean) << ","
                << fixed6(ci.ci_low) << "," << fixed6(ci.ci_high) << "\n";
            dat << it << " " << skill_name(skill) << " " << fixed6(ci.mean) << " "
                << fixed6(ci.ci_low) << " " << fixed6(ci.ci_high) << "\n";
        }
    }
    {
        auto out = open_out(dir / "gesture_curves.csv");
        out << "iteration,skill,mean,ci_low,ci_high\n";
        for (const auto& [it, skill, ci] : curve_rows(true))
            out << it << "," << skill_name(skill) << "," << fixed6(ci.mean) << ","
                << fixed6(ci.ci_low) << "," << fixed6(ci.ci_high) << "\n";
    }

    // Statistics over the final per-seed accuracies.
    {
        auto out = open_out(dir / "stats.txt");
        out << study_stats_text(condition_table(results));
    }

    // Charts.
    const ConditionTable table = condition_table(results);
    {
        std::vector<svg::Bar> bars;
        for (Skill skill : kCountingSkills) {
            const auto ci = stats::mean_ci95(table.at(skill));
            bars.push_back(svg::Bar{std::string(skill_name(skill)), ci.mean, ci.ci_low,
                                    ci.ci_high, ci.ci_defined, skill_color(skill)});
        }
        svg::write_bar_chart(dir / "bars.svg",
                             "Final counting accuracy (study " + std::to_string(study_id) + ")",
                             "accuracy", bars);
    }
    {
        std::vector<svg::Series> series;
        for (Skill skill : kCountingSkills) {
            svg::Series s;
            s.label = std::string(skill_name(skill));
            s.color = skill_color(skill);
            series.push_back(std::move(s));
        }
        for (const auto& [it, skill, ci] : curve_rows(false))
            for (auto& s : series)
                if (s.label == skill_name(skill))
                    s.points.emplace_back(static_cast<double>(it), ci.mean);
        svg::write_line_chart(dir / "curves.svg",
                              "Counting accuracy development (study " +
                                  std::to_string(study_id) + ")",
                              "iteration", "accuracy", series);
    }

    if (study_id == 3) {
        // Side-by-side comparison against the children reference values.
        const std::array<std::pair<Skill, double>, 3> children = {
            std::pair{Skill::CountPoint, kChildrenPointPct},
            std::pair{Skill::CountNoPoint, kChildrenNoPointPct},
            std::pair{Skill::Puppet, kChildrenPuppetPct}};
        auto out = open_out(dir / "children_comparison.csv");
        out << "skill,model_mean,model_ci_low,model_ci_high,children_pct\n";
        std::vector<svg::Bar> bars;
        for (const auto& [skill, pct] : children) {
            const auto ci = stats::mean_ci95(table.at(skill));
            out << skill_name(skill) << "," << fixed6(ci.mean) << "," << fixed6(ci.ci_low) << ","
                << fixed6(ci.ci_high) << "," << sig6(pct) << "\n";
            bars.push_back(svg::Bar{"model " + std::string(skill_name(skill)), ci.mean,
                                    ci.ci_low, ci.ci_high, ci.ci_defined, skill_color(skill)});
            bars.push_back(svg::Bar{"children " + std::string(skill_name(skill)), pct / 100.0,
                                    0.0, 0.0, false, "#9e9e9e"});
        }
        svg::write_bar_chart(dir / "children_overlay.svg",
                             "Model after study 3 vs 4-year-olds", "accuracy", bars);
    }
}

} // namespace countsim
