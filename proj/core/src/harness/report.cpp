#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "argenkit/harness.hpp"
#include "argenkit/metrics.hpp"

namespace argenkit::harness {

namespace {

std::string fmt2(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

void flag_best(ReportRow& row) {
  row.best.assign(row.cells.size(), false);
  std::optional<double> best;
  for (const auto& c : row.cells)
    if (c && (!best || *c > *best)) best = c;
  for (std::size_t i = 0; i < row.cells.size(); ++i) row.best[i] = best && row.cells[i] && *row.cells[i] == *best;
}

ReportRow average_row(const std::string& label, const std::string& group, const std::vector<const ReportRow*>& members,
                      std::size_t models) {
  ReportRow avg{label, group, {}, {}};
  for (std::size_t m = 0; m < models; ++m) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto* row : members) {
      if (row->cells[m]) {
        sum += *row->cells[m];
        ++n;
      }
    }
    avg.cells.push_back(n ? std::optional<double>(metrics::round2(sum / static_cast<double>(n))) : std::nullopt);
  }
  flag_best(avg);
  return avg;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::map<std::string, std::string> groups_from_registry(const std::vector<DatasetSpec>& registry) {
  std::map<std::string, std::string> out;
  for (const auto& spec : registry) {
    if (!spec.group.empty()) out[spec.id] = spec.group;
    for (const auto& [name, src] : spec.splits)
      if (!src.group.empty()) out[spec.id + "/" + name] = src.group;
  }
  return out;
}

std::vector<ReportTable> build_report(const std::vector<EvalRun>& runs, const std::map<std::string, std::string>& groups) {
  std::vector<std::string> metric_order;
  for (const auto& run : runs)
    for (const auto& [metric, value] : run.scores)
      if (std::find(metric_order.begin(), metric_order.end(), metric) == metric_order.end())
        metric_order.push_back(metric);

  auto group_of = [&](const EvalRun& run) -> std::string {
    if (auto it = groups.find(run.dataset_id + "/" + run.split); it != groups.end()) return it->second;
    if (auto it = groups.find(run.dataset_id); it != groups.end()) return it->second;
    return {};
  };

  std::vector<ReportTable> tables;
  for (const auto& metric : metric_order) {
    ReportTable table;
    table.metric = metric;
    std::vector<std::string> row_keys;
    std::map<std::string, std::string> row_group;
    for (const auto& run : runs) {
      if (!run.scores.count(metric)) continue;
      if (std::find(table.models.begin(), table.models.end(), run.model_id) == table.models.end())
        table.models.push_back(run.model_id);
      const std::string key = run.dataset_id + "/" + run.split;
      if (std::find(row_keys.begin(), row_keys.end(), key) == row_keys.end()) {
        row_keys.push_back(key);
        row_group[key] = group_of(run);
      }
    }
    for (const auto& key : row_keys) {
      ReportRow row{key, row_group[key], std::vector<std::optional<double>>(table.models.size()), {}};
      for (const auto& run : runs) {
        if (run.dataset_id + "/" + run.split != key || !run.scores.count(metric)) continue;
        const auto m = static_cast<std::size_t>(
            std::find(table.models.begin(), table.models.end(), run.model_id) - table.models.begin());
        // Later runs (forced re-evaluations) win.
        row.cells[m] = metrics::round2(run.scores.at(metric));
      }
      flag_best(row);
      table.rows.push_back(std::move(row));
    }

    std::vector<std::string> group_names;
    for (const auto& row : table.rows)
      if (!row.group.empty() && std::find(group_names.begin(), group_names.end(), row.group) == group_names.end())
        group_names.push_back(row.group);
    if (!group_names.empty()) {
      for (const auto& g : group_names) {
        std::vector<const ReportRow*> members;
        for (const auto& row : table.rows)
          if (row.group == g) members.push_back(&row);
        table.averages.push_back(average_row("Average " + g, g, members, table.models.size()));
      }
      std::vector<const ReportRow*> all;
      for (const auto& row : table.rows) all.push_back(&row);
      table.averages.push_back(average_row("Average All", "", all, table.models.size()));
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

std::string render_markdown(const std::vector<ReportTable>& tables) {
  std::ostringstream os;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const auto& table = tables[t];
    if (t) os << '\n';
    os << "## " << table.metric << "\n\n| Dataset |";
    for (const auto& m : table.models) os << ' ' << m << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < table.models.size(); ++i) os << "---:|";
    os << '\n';
    auto emit = [&](const ReportRow& row, bool italic) {
      os << "| " << (italic ? "*" + row.label + "*" : row.label) << " |";
      for (std::size_t i = 0; i < row.cells.size(); ++i) {
        if (!row.cells[i]) {
          os << " - |";
        } else if (row.best[i]) {
          os << " **" << fmt2(*row.cells[i]) << "** |";
        } else {
          os << ' ' << fmt2(*row.cells[i]) << " |";
        }
      }
      os << '\n';
    };
    for (const auto& row : table.rows) emit(row, false);
    for (const auto& row : table.averages) emit(row, true);
  }
  return os.str();
}

std::string render_csv(const std::vector<ReportTable>& tables) {
  std::ostringstream os;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const auto& table = tables[t];
    if (t) os << '\n';
    os << "metric,row";
    for (const auto& m : table.models) os << ',' << csv_escape(m);
    os << ",best\n";
    auto emit = [&](const ReportRow& row) {
      os << csv_escape(table.metric) << ',' << csv_escape(row.label);
      std::string best;
      for (std::size_t i = 0; i < row.cells.size(); ++i) {
        os << ',';
        if (row.cells[i]) os << fmt2(*row.cells[i]);
        if (row.best[i]) best += (best.empty() ? "" : ";") + table.models[i];
      }
      os << ',' << csv_escape(best) << '\n';
    };
    for (const auto& row : table.rows) emit(row);
    for (const auto& row : table.averages) emit(row);
  }
  return os.str();
}

}  // namespace argenkit::harness
