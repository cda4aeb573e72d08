#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace lab::harness {

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double x);

// Simple CSV emitter; all numeric cells go through format_double so that
// identical runs produce byte-identical files.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);
    void row_numeric(const std::vector<double>& cells);

private:
    std::ofstream out_;
    std::size_t n_cols_;
};

}  // namespace lab::harness
