#include "bcdprox/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace bcdprox {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_timeseries_csv(const std::filesystem::path &path, const TimeSeries &series,
                          const std::string &prefix) {
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw NumericError("write_timeseries_csv: cannot open " + path.string()); }
    out << "t";
    for (int c = 0; c < series.dim(); ++c) { out << "," << prefix << c; }
    out << "\n";
    for (int i = 0; i < series.length(); ++i) {
        out << format_double(series.grid.time(i));
        for (int c = 0; c < series.dim(); ++c) { out << "," << format_double(series.values(c, i)); }
        out << "\n";
    }
}

TimeSeries read_timeseries_csv(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw NumericError("read_timeseries_csv: cannot open " + path.string()); }
    std::string line;
    if (!std::getline(in, line)) { throw NumericError("read_timeseries_csv: empty file"); }
    int dim = -1; // header columns minus the time column
    {
        std::stringstream hs(line);
        std::string cell;
        int cols = 0;
        while (std::getline(hs, cell, ',')) { ++cols; }
        dim = cols - 1;
    }
    if (dim < 1) { throw NumericError("read_timeseries_csv: malformed header"); }

    std::vector<double> times;
    std::vector<double> data;
    while (std::getline(in, line)) {
        if (line.empty()) { continue; }
        std::stringstream ls(line);
        std::string cell;
        int col = 0;
        while (std::getline(ls, cell, ',')) {
            const double v = std::strtod(cell.c_str(), nullptr);
            if (col == 0) {
                times.push_back(v);
            } else {
                data.push_back(v);
            }
            ++col;
        }
        if (col != dim + 1) { throw NumericError("read_timeseries_csv: ragged row"); }
    }
    const int T = static_cast<int>(times.size());
    Matrix values(dim, T);
    for (int i = 0; i < T; ++i) {
        for (int c = 0; c < dim; ++c) { values(c, i) = data[static_cast<std::size_t>(i) * dim + c]; }
    }
    return TimeSeries(TimeGrid(std::move(times)), std::move(values));
}

} // namespace bcdprox
