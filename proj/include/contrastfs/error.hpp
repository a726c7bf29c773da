#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace contrastfs {

enum class ErrorKind {
    // dataset validation
    EmptyDataset,
    NonFiniteValue,
    LabelOutOfRange,
    EmptyClass,
    ShapeMismatch,
    // ingestion
    Io,
    Parse,
    MissingLabelColumn,
    BadMagic,
    CountMismatch,
    Truncated,
    ClassTooSmall,
    // configuration and selection
    InvalidConfig,
    DegenerateClassCount,
    MOutOfRange,
    TooFewClasses,
    RemoveCountOutOfRange,
    InvalidReplicateCount,
    // evaluation
    EmptySelection,
    KOutOfRange,
    ZeroMean,
    TooFewValues,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `kind()` is the stable part; the
/// message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};

}  // namespace contrastfs
