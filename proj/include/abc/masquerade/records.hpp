#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "abc/tx/transaction.hpp"

namespace abc::masquerade {

using tx::Satoshi;

/// The five transaction parameters the channel imitates.
struct TxFeatureRecord {
    int input_cnt = 1;
    int output_cnt = 1;
    Satoshi fee = 0;
    Satoshi inputs_amount = 0;
    Satoshi outputs_amount = 0;

    /// outputs = inputs - fee, fee > 0, counts >= 1.
    bool valid() const;

    friend bool operator==(const TxFeatureRecord&, const TxFeatureRecord&) = default;
};

/// One row of the corpus CSV:
/// txid,block_height,timestamp,is_coinbase,input_cnt,output_cnt,inputs_amount,outputs_amount,fee
struct CorpusRow {
    std::string txid;
    std::int64_t block_height = 0;
    std::uint64_t timestamp = 0;
    bool is_coinbase = false;
    std::uint64_t input_cnt = 0;
    std::uint64_t output_cnt = 0;
    Satoshi inputs_amount = 0;
    Satoshi outputs_amount = 0;
    Satoshi fee = 0;
};

struct IngestFilters {
    int max_input_cnt = 5;
    int max_output_cnt = 5;
    bool exclude_coinbase = true;
};

struct IngestStats {
    std::size_t read = 0;
    std::size_t kept = 0;
    std::size_t coinbase = 0;
    std::size_t too_many_inputs_or_outputs = 0;
    std::size_t zero_fee = 0;
};

struct Corpus {
    std::vector<TxFeatureRecord> records;
    std::string source;
    IngestFilters filters;
    IngestStats stats;
};

/// Filters rows into a corpus. Throws SchemaError when a row's amounts are
/// inconsistent (outputs != inputs - fee) and EmptyAfterFilter when nothing
/// survives.
Corpus ingest_corpus(const std::vector<CorpusRow>& rows, const IngestFilters& filters = {},
                     std::string source = "memory");

std::vector<CorpusRow> read_corpus_csv(std::istream& in);
std::vector<CorpusRow> read_corpus_csv(const std::filesystem::path& path);
void write_corpus_csv(std::ostream& out, const std::vector<CorpusRow>& rows);
void write_corpus_csv(const std::filesystem::path& path, const std::vector<CorpusRow>& rows);

enum class Label { real = 0, covert = 1 };

struct LabeledRecord {
    TxFeatureRecord record;
    Label label = Label::real;
};

/// FakeFeatureSet CSV shared with the detection harness:
/// input_cnt,output_cnt,inputs_amount,outputs_amount,fee,label
std::vector<LabeledRecord> read_feature_csv(std::istream& in);
std::vector<LabeledRecord> read_feature_csv(const std::filesystem::path& path);
void write_feature_csv(std::ostream& out, const std::vector<LabeledRecord>& rows);
void write_feature_csv(const std::filesystem::path& path, const std::vector<LabeledRecord>& rows);

std::vector<LabeledRecord> label_all(const std::vector<TxFeatureRecord>& records, Label label);

} // namespace abc::masquerade
