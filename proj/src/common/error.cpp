#include "abc/error.hpp"

namespace abc {

const char* errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidEncoding: return "InvalidEncoding";
    case Errc::MalformedData: return "MalformedData";
    case Errc::IoError: return "IoError";
    case Errc::InvalidScalar: return "InvalidScalar";
    case Errc::InvalidPoint: return "InvalidPoint";
    case Errc::NonceYieldsZero: return "NonceYieldsZero";
    case Errc::DegenerateNonce: return "DegenerateNonce";
    case Errc::ExtractionFailed: return "ExtractionFailed";
    case Errc::InvalidSignature: return "InvalidSignature";
    case Errc::IdentityPoint: return "IdentityPoint";
    case Errc::InvalidSeed: return "InvalidSeed";
    case Errc::InvalidSeedScalar: return "InvalidSeedScalar";
    case Errc::DerivationDegenerate: return "DerivationDegenerate";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::BadPrefix: return "BadPrefix";
    case Errc::FeeNonPositive: return "FeeNonPositive";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::MalformedScriptSig: return "MalformedScriptSig";
    case Errc::DoubleSpend: return "DoubleSpend";
    case Errc::BadSignature: return "BadSignature";
    case Errc::UnknownInput: return "UnknownInput";
    case Errc::CorruptFile: return "CorruptFile";
    case Errc::ChainLocked: return "ChainLocked";
    case Errc::EmptyAfterFilter: return "EmptyAfterFilter";
    case Errc::SchemaError: return "SchemaError";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::ModelMismatch: return "ModelMismatch";
    case Errc::WeightSumError: return "WeightSumError";
    case Errc::DegenerateData: return "DegenerateData";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NegotiationNotFound: return "NegotiationNotFound";
    case Errc::SegmentUnencodable: return "SegmentUnencodable";
    case Errc::FrameCorrupt: return "FrameCorrupt";
    case Errc::SendInterrupted: return "SendInterrupted";
    }
    return "Unknown";
}

} // namespace abc
