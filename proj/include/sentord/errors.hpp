#pragma once

#include <stdexcept>
#include <string>

namespace sentord {

// Exit-code families used by the CLI: usage=1, data=2, numeric=3, oracle=4.

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyText : DataError {
    EmptyText() : DataError("empty or whitespace-only text") {}
};

struct EmptyCorpus : DataError {
    EmptyCorpus() : DataError("corpus has no documents") {}
};

struct EmptySentence : DataError {
    EmptySentence() : DataError("sentence has no tokens") {}
};

struct EmptyBatch : DataError {
    EmptyBatch() : DataError("batch has no examples") {}
};

struct TooSmall : DataError {
    using DataError::DataError;
};

struct TooLarge : DataError {
    using DataError::DataError;
};

struct InvalidOrder : DataError {
    using DataError::DataError;
};

struct InvalidBeam : DataError {
    using DataError::DataError;
};

struct ShapeError : NumericError {
    using NumericError::NumericError;
};

struct NotScalar : NumericError {
    using NumericError::NumericError;
};

struct TrainDiverged : NumericError {
    using NumericError::NumericError;
};

struct RetryableFetchError : DataError {
    using DataError::DataError;
};

struct ChecksumMismatch : DataError {
    using DataError::DataError;
};

struct VersionMismatch : DataError {
    using DataError::DataError;
};

struct TruncatedFile : DataError {
    using DataError::DataError;
};

struct UnsupportedFormat : DataError {
    using DataError::DataError;
};

}  // namespace sentord
