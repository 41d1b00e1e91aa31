#ifndef SNOE_DATASET_HPP_
#define SNOE_DATASET_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace snoe {

// Column-named n x p sample table.
struct DataMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd values;  // rows = samples

    int n() const { return static_cast<int>(values.rows()); }
    int p() const { return static_cast<int>(values.cols()); }
    int col(const std::string& label) const;  // throws on unknown label
    Eigen::VectorXd column(int j) const { return values.col(j); }

    DataMatrix rows(const std::vector<int>& idx) const;

    static DataMatrix read_csv(const std::string& path);
    void write_csv(const std::string& path) const;
};

// Seeded 50/50 split: indices 0..n-1 shuffled by Fisher-Yates, first half
// train (ceil on odd n), remainder test.
struct SplitIdx {
    std::vector<int> train, test;
};
SplitIdx split_half(int n, std::uint64_t seed);

}  // namespace snoe

#endif  // SNOE_DATASET_HPP_
