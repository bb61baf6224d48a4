#pragma once

#include <stdexcept>
#include <string>

namespace abc {

/// Error classes surfaced by every module. The CLI prints errc_name() of the
/// failing class and maps it to a nonzero exit status.
enum class Errc {
    InvalidArgument,
    InvalidEncoding,
    MalformedData,
    IoError,
    // crypto
    InvalidScalar,
    InvalidPoint,
    NonceYieldsZero,
    DegenerateNonce,
    ExtractionFailed,
    InvalidSignature,
    IdentityPoint,
    // hd wallet
    InvalidSeed,
    InvalidSeedScalar,
    DerivationDegenerate,
    ChecksumMismatch,
    BadPrefix,
    // transactions
    FeeNonPositive,
    IndexOutOfRange,
    ArityMismatch,
    MalformedScriptSig,
    // chain
    DoubleSpend,
    BadSignature,
    UnknownInput,
    CorruptFile,
    ChainLocked,
    // masquerade
    EmptyAfterFilter,
    SchemaError,
    InsufficientData,
    ModelMismatch,
    WeightSumError,
    // evaluation
    DegenerateData,
    LengthMismatch,
    // channel
    NegotiationNotFound,
    SegmentUnencodable,
    FrameCorrupt,
    SendInterrupted,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }
    const char* name() const noexcept { return errc_name(code_); }

private:
    Errc code_;
};

} // namespace abc
