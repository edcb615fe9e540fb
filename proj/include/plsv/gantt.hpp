#pragma once

#include <string>
#include <vector>

#include "plsv/instance.hpp"
#include "plsv/schedule.hpp"

namespace plsv {

struct GanttSegment {
  int batch = 0;
  int family = 0;
  int op = -1;  // -1 for the setup segment
  Time start = 0;
  Time end = 0;
};

struct GanttLayout {
  std::vector<std::vector<GanttSegment>> rows;  // one row per machine
  std::vector<Time> job_completion;
  Time horizon = 0;
  Time twct = 0;
};

// Throws Error(Infeasible) listing every violation when the schedule is not feasible.
GanttLayout gantt_layout(const Instance& inst, const Schedule& sched);

// SVG 1.1. Each segment is a rect carrying data-machine, data-start and data-end.
std::string render_svg(const GanttLayout& layout);
// Character bars (one column per time unit, compressed for long horizons) followed
// by the exact segment table.
std::string render_text(const GanttLayout& layout);

}  // namespace plsv
