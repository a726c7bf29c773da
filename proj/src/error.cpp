#include "contrastfs/error.hpp"

namespace contrastfs {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorKind::EmptyClass: return "EmptyClass";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::MissingLabelColumn: return "MissingLabelColumn";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::Truncated: return "Truncated";
    case ErrorKind::ClassTooSmall: return "ClassTooSmall";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::DegenerateClassCount: return "DegenerateClassCount";
    case ErrorKind::MOutOfRange: return "MOutOfRange";
    case ErrorKind::TooFewClasses: return "TooFewClasses";
    case ErrorKind::RemoveCountOutOfRange: return "RemoveCountOutOfRange";
    case ErrorKind::InvalidReplicateCount: return "InvalidReplicateCount";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::KOutOfRange: return "KOutOfRange";
    case ErrorKind::ZeroMean: return "ZeroMean";
    case ErrorKind::TooFewValues: return "TooFewValues";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), m_kind(kind)
{
}

}  // namespace contrastfs
