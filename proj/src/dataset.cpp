#include "snoe/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "snoe/rng.hpp"

namespace snoe {

int DataMatrix::col(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw std::invalid_argument("DataMatrix: unknown column '" + label + "'");
    return static_cast<int>(it - labels.begin());
}

DataMatrix DataMatrix::rows(const std::vector<int>& idx) const {
    DataMatrix out;
    out.labels = labels;
    out.values.resize(static_cast<Eigen::Index>(idx.size()), values.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.values.row(static_cast<Eigen::Index>(r)) = values.row(idx[r]);
    return out;
}

static std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim whitespace and CR
        std::size_t b = field.find_first_not_of(" \t\r");
        std::size_t e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

DataMatrix DataMatrix::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
    DataMatrix d;
    d.labels = split_csv_line(line);
    const std::size_t p = d.labels.size();
    if (p == 0) throw std::runtime_error("CSV header has no columns: " + path);
    std::vector<double> cells;
    int nrows = 0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != p)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(p) + " fields, got " + std::to_string(fields.size()));
        for (const auto& f : fields) {
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(f, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": non-numeric cell '" + f + "'");
            }
            if (pos != f.size()) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": non-numeric cell '" + f + "'");
            cells.push_back(v);
        }
        ++nrows;
    }
    d.values.resize(nrows, static_cast<Eigen::Index>(p));
    for (int r = 0; r < nrows; ++r)
        for (std::size_t c = 0; c < p; ++c) d.values(r, static_cast<Eigen::Index>(c)) = cells[r * p + c];
    return d;
}

void DataMatrix::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t c = 0; c < labels.size(); ++c) out << (c ? "," : "") << labels[c];
    out << "\n";
    out.precision(17);
    for (int r = 0; r < n(); ++r) {
        for (int c = 0; c < p(); ++c) out << (c ? "," : "") << values(r, c);
        out << "\n";
    }
}

SplitIdx split_half(int n, std::uint64_t seed) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::uint64_t state = seed;
    for (int i = n - 1; i > 0; --i) {
        // unbiased-enough bounded draw for shuffling (n is small against 2^64)
        int j = static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(i + 1));
        std::swap(idx[i], idx[j]);
    }
    SplitIdx s;
    int half = (n + 1) / 2;
    s.train.assign(idx.begin(), idx.begin() + half);
    s.test.assign(idx.begin() + half, idx.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

}  // namespace snoe
