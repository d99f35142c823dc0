#include "gradecast/error.hpp"

namespace gradecast {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::FileUnreadable: return "FileUnreadable";
        case ErrorCode::HeaderMismatch: return "HeaderMismatch";
        case ErrorCode::RowArity: return "RowArity";
        case ErrorCode::InvalidSchema: return "InvalidSchema";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::DropCapExceeded: return "DropCapExceeded";
        case ErrorCode::AllMissingColumn: return "AllMissingColumn";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptySelection: return "EmptySelection";
        case ErrorCode::UnseenCategory: return "UnseenCategory";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::DegenerateDesign: return "DegenerateDesign";
        case ErrorCode::NonBinaryLabels: return "NonBinaryLabels";
        case ErrorCode::SingleClassTraining: return "SingleClassTraining";
        case ErrorCode::EmptyNode: return "EmptyNode";
        case ErrorCode::FeatureCountMismatch: return "FeatureCountMismatch";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::CorruptArtifact: return "CorruptArtifact";
        case ErrorCode::BadK: return "BadK";
        case ErrorCode::UnknownAxis: return "UnknownAxis";
        case ErrorCode::ModelPairMismatch: return "ModelPairMismatch";
        case ErrorCode::UnsupportedModel: return "UnsupportedModel";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error Error::with_context(std::string_view context) const {
    return Error(code_, std::string(context) + ": " + what());
}

}  // namespace gradecast
