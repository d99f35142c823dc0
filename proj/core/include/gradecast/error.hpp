#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gradecast {

/// Machine-readable failure codes. The CLI prints these verbatim.
enum class ErrorCode {
    FileUnreadable,
    HeaderMismatch,
    RowArity,
    InvalidSchema,
    InvalidConfig,
    DropCapExceeded,
    AllMissingColumn,
    LengthMismatch,
    EmptySelection,
    UnseenCategory,
    TooFewRows,
    DegenerateDesign,
    NonBinaryLabels,
    SingleClassTraining,
    EmptyNode,
    FeatureCountMismatch,
    VersionMismatch,
    CorruptArtifact,
    BadK,
    UnknownAxis,
    ModelPairMismatch,
    UnsupportedModel,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// Same code, message prefixed with `context: `.
    Error with_context(std::string_view context) const;

private:
    ErrorCode code_;
};

}  // namespace gradecast
