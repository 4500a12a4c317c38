#include "nlpre/trace.hpp"

#include <cstdio>
#include <fstream>

namespace nlpre {

void Trace::append(std::vector<double> row) {
    if (static_cast<Index>(row.size()) != width()) {
        throw Error("trace row width " + std::to_string(row.size()) + " does not match schema width " +
                    std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string trace_to_csv(const Trace& trace) {
    std::string out;
    out.reserve(64 + trace.rows.size() * trace.columns.size() * 12);
    out += "# drem-trace v1 scenario=" + trace.scenario + "\n";
    for (size_t i = 0; i < trace.columns.size(); ++i) {
        if (i) out += ',';
        out += trace.columns[i];
    }
    out += '\n';
    char buf[40];
    for (const auto& row : trace.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void export_csv(const Trace& trace, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open " + path + " for writing");
    const std::string csv = trace_to_csv(trace);
    file.write(csv.data(), static_cast<std::streamsize>(csv.size()));
    if (!file) throw Error("write failed for " + path);
}

}  // namespace nlpre
