#include "abc/masquerade/records.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace abc::masquerade {

namespace {

constexpr std::string_view kCorpusHeader =
    "txid,block_height,timestamp,is_coinbase,input_cnt,output_cnt,inputs_amount,outputs_amount,fee";
constexpr std::string_view kFeatureHeader = "input_cnt,output_cnt,inputs_amount,outputs_amount,fee,label";

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    return s;
}

template <typename T>
T parse_int(std::string_view field, std::size_t line_no, const char* column)
{
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw Error(Errc::SchemaError,
                    "line " + std::to_string(line_no) + ": bad integer in column " + column + ": '" +
                        std::string(field) + "'");
    }
    return value;
}

bool parse_bool(std::string_view field, std::size_t line_no)
{
    if (field == "1" || field == "true" || field == "True") return true;
    if (field == "0" || field == "false" || field == "False") return false;
    throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": bad boolean '" + std::string(field) + "'");
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    return out;
}

} // namespace

bool TxFeatureRecord::valid() const
{
    return input_cnt >= 1 && output_cnt >= 1 && fee > 0 && fee < inputs_amount &&
           outputs_amount == inputs_amount - fee;
}

Corpus ingest_corpus(const std::vector<CorpusRow>& rows, const IngestFilters& filters, std::string source)
{
    Corpus corpus;
    corpus.source = std::move(source);
    corpus.filters = filters;
    for (const CorpusRow& row : rows) {
        ++corpus.stats.read;
        if (filters.exclude_coinbase && row.is_coinbase) {
            ++corpus.stats.coinbase;
            continue;
        }
        if (row.input_cnt < 1 || row.output_cnt < 1) {
            throw Error(Errc::SchemaError, "row " + row.txid + " has zero inputs or outputs");
        }
        if (row.fee > row.inputs_amount || row.outputs_amount != row.inputs_amount - row.fee) {
            throw Error(Errc::SchemaError, "row " + row.txid + ": outputs_amount != inputs_amount - fee");
        }
        if (row.input_cnt > static_cast<std::uint64_t>(filters.max_input_cnt) ||
            row.output_cnt > static_cast<std::uint64_t>(filters.max_output_cnt)) {
            ++corpus.stats.too_many_inputs_or_outputs;
            continue;
        }
        if (row.fee == 0 || row.outputs_amount == 0) {
            ++corpus.stats.zero_fee;
            continue;
        }
        corpus.records.push_back({static_cast<int>(row.input_cnt), static_cast<int>(row.output_cnt), row.fee,
                                  row.inputs_amount, row.outputs_amount});
    }
    corpus.stats.kept = corpus.records.size();
    if (corpus.records.empty()) throw Error(Errc::EmptyAfterFilter, "no records left after filtering");
    return corpus;
}

std::vector<CorpusRow> read_corpus_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCorpusHeader) {
        throw Error(Errc::SchemaError, "corpus CSV must start with header: " + std::string(kCorpusHeader));
    }
    std::vector<CorpusRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (text.empty()) continue;
        auto f = split_fields(text);
        if (f.size() != 9) throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": expected 9 fields");
        CorpusRow row;
        row.txid = std::string(f[0]);
        row.block_height = parse_int<std::int64_t>(f[1], line_no, "block_height");
        row.timestamp = parse_int<std::uint64_t>(f[2], line_no, "timestamp");
        row.is_coinbase = parse_bool(f[3], line_no);
        row.input_cnt = parse_int<std::uint64_t>(f[4], line_no, "input_cnt");
        row.output_cnt = parse_int<std::uint64_t>(f[5], line_no, "output_cnt");
        row.inputs_amount = parse_int<Satoshi>(f[6], line_no, "inputs_amount");
        row.outputs_amount = parse_int<Satoshi>(f[7], line_no, "outputs_amount");
        row.fee = parse_int<Satoshi>(f[8], line_no, "fee");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<CorpusRow> read_corpus_csv(const std::filesystem::path& path)
{
    auto in = open_in(path);
    return read_corpus_csv(in);
}

void write_corpus_csv(std::ostream& out, const std::vector<CorpusRow>& rows)
{
    out << kCorpusHeader << '\n';
    for (const auto& r : rows) {
        out << r.txid << ',' << r.block_height << ',' << r.timestamp << ',' << (r.is_coinbase ? 1 : 0) << ','
            << r.input_cnt << ',' << r.output_cnt << ',' << r.inputs_amount << ',' << r.outputs_amount << ','
            << r.fee << '\n';
    }
}

void write_corpus_csv(const std::filesystem::path& path, const std::vector<CorpusRow>& rows)
{
    auto out = open_out(path);
    write_corpus_csv(out, rows);
}

std::vector<LabeledRecord> read_feature_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || trim(line) != kFeatureHeader) {
        throw Error(Errc::SchemaError, "feature CSV must start with header: " + std::string(kFeatureHeader));
    }
    std::vector<LabeledRecord> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (text.empty()) continue;
        auto f = split_fields(text);
        if (f.size() != 6) throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": expected 6 fields");
        LabeledRecord row;
        row.record.input_cnt = parse_int<int>(f[0], line_no, "input_cnt");
        row.record.output_cnt = parse_int<int>(f[1], line_no, "output_cnt");
        row.record.inputs_amount = parse_int<Satoshi>(f[2], line_no, "inputs_amount");
        row.record.outputs_amount = parse_int<Satoshi>(f[3], line_no, "outputs_amount");
        row.record.fee = parse_int<Satoshi>(f[4], line_no, "fee");
        if (f[5] == "real") {
            row.label = Label::real;
        } else if (f[5] == "covert") {
            row.label = Label::covert;
        } else {
            throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": label must be real or covert");
        }
        if (!row.record.valid()) {
            throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": record violates fee invariants");
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<LabeledRecord> read_feature_csv(const std::filesystem::path& path)
{
    auto in = open_in(path);
    return read_feature_csv(in);
}

void write_feature_csv(std::ostream& out, const std::vector<LabeledRecord>& rows)
{
    out << kFeatureHeader << '\n';
    for (const auto& r : rows) {
        out << r.record.input_cnt << ',' << r.record.output_cnt << ',' << r.record.inputs_amount << ','
            << r.record.outputs_amount << ',' << r.record.fee << ',' << (r.label == Label::real ? "real" : "covert")
            << '\n';
    }
}

void write_feature_csv(const std::filesystem::path& path, const std::vector<LabeledRecord>& rows)
{
    auto out = open_out(path);
    write_feature_csv(out, rows);
}

std::vector<LabeledRecord> label_all(const std::vector<TxFeatureRecord>& records, Label label)
{
    std::vector<LabeledRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back({r, label});
    return out;
}

} // namespace abc::masquerade
