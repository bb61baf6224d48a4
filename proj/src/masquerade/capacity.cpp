#include "abc/masquerade/capacity.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "abc/error.hpp"

namespace abc::masquerade {

CapacityEstimate expected_capacity(std::span<const double> weights, std::span<const double> avg_fees)
{
    if (weights.size() != avg_fees.size()) throw Error(Errc::LengthMismatch, "weights and fees differ in length");
    if (weights.empty()) throw Error(Errc::InvalidArgument, "empty capacity table");
    double sum = 0;
    for (double w : weights) {
        if (w < 0 || !std::isfinite(w)) throw Error(Errc::WeightSumError, "weights must be finite and non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        throw Error(Errc::WeightSumError, "weights sum to " + std::to_string(sum) + ", not 1");
    }
    CapacityEstimate est;
    for (std::size_t c = 0; c < weights.size(); ++c) {
        est.mean_inputs += weights[c] * static_cast<double>(c + 1);
        est.fee_per_tx += weights[c] * avg_fees[c];
    }
    est.bits_per_tx = kBitsPerInput * est.mean_inputs;
    return est;
}

CapacityTable read_capacity_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "input_cnt,proportion,avg_fee") {
        throw Error(Errc::SchemaError, "capacity CSV must start with header: input_cnt,proportion,avg_fee");
    }
    CapacityTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
            throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": expected 3 fields");
        }
        try {
            std::size_t used = 0;
            const long cnt = std::stol(a, &used);
            if (used != a.size() || cnt != static_cast<long>(table.weights.size()) + 1) {
                throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": input_cnt must run 1, 2, ...");
            }
            table.weights.push_back(std::stod(b));
            table.avg_fees.push_back(std::stod(c));
        } catch (const std::logic_error&) {
            throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": bad number");
        }
    }
    if (table.weights.empty()) throw Error(Errc::SchemaError, "capacity CSV has no rows");
    return table;
}

} // namespace abc::masquerade
