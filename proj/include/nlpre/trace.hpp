// Time-indexed record of every signal of a scenario run, exportable to CSV.
#pragma once

#include "nlpre/types.hpp"

#include <string>
#include <vector>

namespace nlpre {

struct Trace {
    std::string scenario;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void append(std::vector<double> row);
    Index width() const { return static_cast<Index>(columns.size()); }
};

/// Renders the trace as CSV text: a schema comment line, the header row, one
/// data row per step. Values are written with 17 significant digits and LF
/// line endings, so re-rendering the same trace is byte-identical.
std::string trace_to_csv(const Trace& trace);

/// Writes trace_to_csv(trace) to `path`. I/O failures surface as nlpre::Error.
void export_csv(const Trace& trace, const std::string& path);

}  // namespace nlpre
