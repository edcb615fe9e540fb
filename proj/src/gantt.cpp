#include "plsv/gantt.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace plsv {

namespace {

const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2",
                                "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

const char* colour(int family) { return kPalette[family % 10]; }

std::string label(const GanttSegment& s) {
  return s.op < 0 ? "f" + std::to_string(s.family + 1) : std::to_string(s.op + 1);
}

}  // namespace

GanttLayout gantt_layout(const Instance& inst, const Schedule& sched) {
  const auto violations = check_feasibility(inst, sched);
  if (!violations.empty()) throw Error(ErrorKind::Infeasible, "infeasible schedule: " + describe(violations));
  const auto ev = evaluate(inst, sched);
  GanttLayout g;
  g.rows.resize(inst.num_machines());
  for (int k = 0; k < inst.num_machines(); ++k)
    for (int b = 0; b < static_cast<int>(sched.machines[k].size()); ++b) {
      const Batch& batch = sched.machines[k][b];
      Time t = ev.batch_start[k][b];
      const Time setup = inst.families[batch.family].setup;
      g.rows[k].push_back({b, batch.family, -1, t, t + setup});
      t += setup;
      for (int i : batch.ops) {
        g.rows[k].push_back({b, batch.family, i, t, t + inst.ops[i].processing});
        t += inst.ops[i].processing;
      }
    }
  g.job_completion = ev.job_completion;
  g.horizon = ev.cmax;
  g.twct = ev.twct;
  return g;
}

std::string render_svg(const GanttLayout& g) {
  const int left = 60, top = 30, row_h = 36, gap = 10;
  const double scale = g.horizon > 0 ? std::max(2.0, 900.0 / static_cast<double>(g.horizon)) : 10.0;
  const int rows = static_cast<int>(g.rows.size());
  const double width = left + scale * static_cast<double>(g.horizon) + 40;
  const int axis_y = top + rows * (row_h + gap);
  const int height = axis_y + 30 + 18 * static_cast<int>(g.job_completion.size() > 0);
  auto x = [&](Time t) { return left + scale * static_cast<double>(t); };

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<title>TWCT " << g.twct << "</title>\n";
  for (int k = 0; k < rows; ++k) {
    const int y = top + k * (row_h + gap);
    os << "<text x=\"8\" y=\"" << y + row_h / 2 + 4 << "\">M" << k + 1 << "</text>\n";
    for (const auto& s : g.rows[k]) {
      const bool setup = s.op < 0;
      os << "<rect data-machine=\"" << k + 1 << "\" data-start=\"" << s.start << "\" data-end=\"" << s.end
         << "\" x=\"" << x(s.start) << "\" y=\"" << y << "\" width=\"" << x(s.end) - x(s.start) << "\" height=\""
         << row_h << "\" fill=\"" << (setup ? "#ffffff" : colour(s.family)) << "\" stroke=\"" << colour(s.family)
         << "\"" << (setup ? " stroke-dasharray=\"3,2\"" : "") << "/>\n";
      os << "<text x=\"" << (x(s.start) + x(s.end)) / 2 << "\" y=\"" << y + row_h / 2 + 4
         << "\" text-anchor=\"middle\">" << label(s) << "</text>\n";
    }
  }
  os << "<line x1=\"" << left << "\" y1=\"" << axis_y << "\" x2=\"" << x(g.horizon) << "\" y2=\"" << axis_y
     << "\" stroke=\"#000000\"/>\n";
  const Time step = g.horizon <= 100 ? 10 : (g.horizon <= 500 ? 50 : 100);
  for (Time t = 0; t <= g.horizon; t += step)
    os << "<text x=\"" << x(t) << "\" y=\"" << axis_y + 14 << "\" text-anchor=\"middle\">" << t << "</text>\n";
  for (size_t j = 0; j < g.job_completion.size(); ++j) {
    const double cx = x(g.job_completion[j]);
    os << "<line x1=\"" << cx << "\" y1=\"" << top - 6 << "\" x2=\"" << cx << "\" y2=\"" << axis_y
       << "\" stroke=\"#d62728\" stroke-dasharray=\"2,3\"/>\n";
    os << "<text x=\"" << cx << "\" y=\"" << axis_y + 30 + 12 * static_cast<int>(j % 2) << "\" fill=\"#d62728\""
       << " text-anchor=\"middle\">C" << j + 1 << "=" << g.job_completion[j] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_text(const GanttLayout& g) {
  // one column per unit up to 120 units, otherwise compressed
  const Time cols = std::min<Time>(std::max<Time>(g.horizon, 1), 120);
  auto col = [&](Time t) { return static_cast<size_t>(t * cols / std::max<Time>(g.horizon, 1)); };
  std::ostringstream os;
  os << "horizon " << g.horizon << "  twct " << g.twct << "\n";
  for (size_t k = 0; k < g.rows.size(); ++k) {
    std::string bar(static_cast<size_t>(cols), '.');
    for (const auto& s : g.rows[k]) {
      const char c = s.op < 0 ? '=' : static_cast<char>('a' + s.batch % 26);
      for (size_t p = col(s.start); p < col(s.end) && p < bar.size(); ++p) bar[p] = c;
    }
    os << "M" << std::left << std::setw(3) << k + 1 << "|" << bar << "|\n";
  }
  os << "\nmachine batch segment  start    end\n";
  for (size_t k = 0; k < g.rows.size(); ++k)
    for (const auto& s : g.rows[k]) {
      const std::string what = s.op < 0 ? "setup f" + std::to_string(s.family + 1) : "op " + std::to_string(s.op + 1);
      os << std::right << std::setw(7) << k + 1 << std::setw(6) << s.batch + 1 << "  " << std::left << std::setw(9)
         << what << std::right << std::setw(5) << s.start << std::setw(7) << s.end << "\n";
    }
  os << "\njob completion\n";
  for (size_t j = 0; j < g.job_completion.size(); ++j)
    os << "  C" << j + 1 << " = " << g.job_completion[j] << "\n";
  return os.str();
}

}  // namespace plsv
