#include "smcsweep/analysis/scorecard.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "smcsweep/csv.hpp"

namespace smcsweep::analysis {

const ObservableSummary* ScorecardRow::find(std::string_view observable) const {
  for (const auto& s : observables) {
    if (s.observable == observable) return &s;
  }
  return nullptr;
}

ScorecardOptions default_scorecard_options(const CampaignResults& results) {
  if (!results.tradeoff) throw std::invalid_argument("the campaign declares no trade-off pair");
  ScorecardOptions o;
  o.alpha = results.alpha;
  o.tail_fraction = results.tail_fraction;
  o.pair = *results.tradeoff;
  return o;
}

ObservableSummary summarize(const std::string& observable, const std::vector<Trajectory>& points,
                            Direction direction, double alpha, double tail_fraction, SignificanceTest test) {
  ObservableSummary s;
  s.observable = observable;
  s.complete = true;
  double n_sum = 0.0;
  std::size_t n_count = 0;
  for (const auto& t : points) {
    for (const auto& p : t) {
      n_sum += static_cast<double>(p.n);
      ++n_count;
    }
  }
  s.mean_nsamples = n_count ? n_sum / static_cast<double>(n_count) : 0.0;
  s.final_diff = final_diff_count(points, alpha, test);
  s.tail = tail_metrics(points, alpha, tail_fraction, test);
  s.best = best_tail_point(s.tail.tail_means, direction);
  return s;
}

std::vector<ScorecardRow> build_scorecard(const CampaignResults& results, const ScorecardOptions& options) {
  const auto* good = results.find_observable(options.pair.good);
  const auto* bad = results.find_observable(options.pair.bad);
  if (!good) throw std::invalid_argument("unknown trade-off observable '" + options.pair.good + "'");
  if (!bad) throw std::invalid_argument("unknown trade-off observable '" + options.pair.bad + "'");
  const std::string best_obs = options.best_observable.value_or(options.pair.bad);
  const auto* best_spec = results.find_observable(best_obs);
  if (!best_spec) throw std::invalid_argument("unknown observable '" + best_obs + "'");

  std::vector<ScorecardRow> rows;
  for (const auto& exp : results.experiments) {
    ScorecardRow row;
    row.experiment = exp.spec.id;
    row.parameter = exp.spec.parameter;
    row.n_values = exp.spec.values.size();
    row.best_obs = best_obs;

    // Per-value tail means, available whenever a trajectory exists.
    std::map<std::string, std::vector<std::optional<double>>> tail_means;
    for (const auto& obs : results.observables) {
      const auto& per_value = exp.by_observable.at(obs.name);
      auto& means = tail_means[obs.name];
      bool complete = true;
      std::vector<Trajectory> points;
      for (const auto& t : per_value) {
        if (!t) {
          complete = false;
          means.push_back(std::nullopt);
          continue;
        }
        points.push_back(*t);
        const std::size_t w = tail_window(t->size(), options.tail_fraction);
        double sum = 0.0;
        for (std::size_t s = t->size() - w; s < t->size(); ++s) sum += (*t)[s].mean;
        means.push_back(sum / static_cast<double>(w));
      }
      if (complete) {
        row.observables.push_back(
            summarize(obs.name, points, obs.direction, options.alpha, options.tail_fraction, options.test));
      } else {
        row.partial = true;
        ObservableSummary s;
        s.observable = obs.name;
        row.observables.push_back(s);
      }
    }

    row.tradeoffs.assign(row.n_values, std::nullopt);
    const std::size_t base = exp.spec.baseline_index;
    const auto& g = tail_means[options.pair.good];
    const auto& b = tail_means[options.pair.bad];
    if (g[base] && b[base]) {
      const std::map<std::string, double> baseline{{options.pair.good, *g[base]}, {options.pair.bad, *b[base]}};
      for (std::size_t v = 0; v < row.n_values; ++v) {
        if (v == base || !g[v] || !b[v]) continue;
        const std::map<std::string, double> point{{options.pair.good, *g[v]}, {options.pair.bad, *b[v]}};
        const Tradeoff t = classify_tradeoff(point, baseline, options.pair.good, options.pair.bad);
        row.tradeoffs[v] = t;
        if (t == Tradeoff::win_win) ++row.winwin;
        else if (t == Tradeoff::lose_lose) ++row.loselose;
        else ++row.mixed;
      }
    }
    if (const auto* s = row.find(best_obs); s && s->complete) row.best = s->best;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string significant_digits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

void write_scorecard_csv(std::ostream& out, const std::vector<ScorecardRow>& rows,
                         const std::vector<std::string>& observables) {
  out << "experiment,winwin,mixed,loselose,best_obs,best_point,best_tail_mean";
  for (const auto& o : observables) out << ",mean_nsamples_" << o;
  for (const auto& o : observables) out << ",final_diff_" << o;
  for (const auto& o : observables) out << ",tail_share_" << o;
  out << '\n';
  for (const auto& r : rows) {
    out << csv::escape(r.experiment) << ',' << r.winwin << ',' << r.mixed << ',' << r.loselose << ','
        << csv::escape(r.best_obs) << ',';
    if (r.best) out << r.best->label << ',' << csv::format_double(r.best->value);
    else out << ',';
    auto each = [&](auto&& cell) {
      for (const auto& o : observables) {
        out << ',';
        const auto* s = r.find(o);
        if (s && s->complete) cell(*s);
      }
    };
    each([&](const ObservableSummary& s) { out << csv::format_double(s.mean_nsamples); });
    each([&](const ObservableSummary& s) { out << s.final_diff.significant << '/' << s.final_diff.total; });
    each([&](const ObservableSummary& s) { out << csv::format_double(s.tail.tail_diff_share); });
    out << '\n';
  }
}

std::string render_scorecard(const std::vector<ScorecardRow>& rows, const std::vector<std::string>& observables) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"Experiment", "W/M/L", "Best tail"};
  for (const auto& o : observables) header.push_back("NSamples " + o);
  for (const auto& o : observables) header.push_back("Final " + o);
  for (const auto& o : observables) header.push_back("Tail " + o);
  table.push_back(header);
  for (const auto& r : rows) {
    std::vector<std::string> cells;
    cells.push_back(r.experiment + " (" + r.parameter + ")" + (r.partial ? " *" : ""));
    cells.push_back(std::to_string(r.winwin) + "/" + std::to_string(r.mixed) + "/" + std::to_string(r.loselose));
    cells.push_back(r.best ? r.best_obs + " " + r.best->label + " " + significant_digits(r.best->value) : "-");
    for (const auto& o : observables) {
      const auto* s = r.find(o);
      cells.push_back(s && s->complete ? fixed(s->mean_nsamples, 1) : "-");
    }
    for (const auto& o : observables) {
      const auto* s = r.find(o);
      cells.push_back(s && s->complete ? std::to_string(s->final_diff.significant) + "/" +
                                             std::to_string(s->final_diff.total)
                                       : "-");
    }
    for (const auto& o : observables) {
      const auto* s = r.find(o);
      cells.push_back(s && s->complete ? fixed(s->tail.tail_diff_share, 2) : "-");
    }
    table.push_back(std::move(cells));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      if (c) out << "  ";
      out << table[r][c];
      if (c + 1 < table[r].size()) out << std::string(width[c] - table[r][c].size(), ' ');
    }
    out << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    }
  }
  bool any_partial = false;
  for (const auto& r : rows) any_partial |= r.partial;
  if (any_partial) out << "* incomplete experiment: some jobs are missing or did not converge\n";
  return out.str();
}

}  // namespace smcsweep::analysis
