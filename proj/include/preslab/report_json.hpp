#pragma once

#include <string>

#include "preslab/preservation.hpp"

// JSON rendering of analysis reports. The shape is:
//   { "query": ..., "params": {...}, "outcome": ...,
//     "witness_structure"?: <structure file text>, "cover"?: [...],
//     "cores"?: [...], "minimal_cores"?: [...], "bound"?: n,
//     "elapsed_ms"?: t, "search_complete": bool }
// elapsed_ms is included only when include_timing is set, so that search
// output stays byte-identical across runs and parallelism degrees.

namespace preslab {

std::string core_report_json(const CoreReport& report, bool include_timing = false);
std::string cover_report_json(const CoverReport& report, bool include_timing = false);
std::string counterexample_report_json(const CounterexampleReport& report,
                                       bool include_timing = false);

std::string core_report_text(const CoreReport& report);
std::string cover_report_text(const CoverReport& report);
std::string counterexample_report_text(const CounterexampleReport& report);

}  // namespace preslab
