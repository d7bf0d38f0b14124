#include "qcsc/errors.hpp"

namespace qcsc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DanglingLink: return "DanglingLink";
    case ErrorCode::IsolatedQpu: return "IsolatedQpu";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::TimestampInPast: return "TimestampInPast";
    case ErrorCode::HandlerFailure: return "HandlerFailure";
    case ErrorCode::ModelTooLarge: return "ModelTooLarge";
    case ErrorCode::InvalidTheta: return "InvalidTheta";
    case ErrorCode::InvalidDistance: return "InvalidDistance";
    case ErrorCode::InvalidCircuit: return "InvalidCircuit";
    case ErrorCode::ResourceHeld: return "ResourceHeld";
    case ErrorCode::ResourceInaccessible: return "ResourceInaccessible";
    case ErrorCode::UnknownResource: return "UnknownResource";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::AlreadyReleased: return "AlreadyReleased";
    case ErrorCode::TokenExpired: return "TokenExpired";
    case ErrorCode::DeviceRejected: return "DeviceRejected";
    case ErrorCode::UnknownJob: return "UnknownJob";
    case ErrorCode::NotDone: return "NotDone";
    case ErrorCode::NotCancellable: return "NotCancellable";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UnsatisfiableDemand: return "UnsatisfiableDemand";
    case ErrorCode::CouplingInfeasible: return "CouplingInfeasible";
    case ErrorCode::ResidencyViolation: return "ResidencyViolation";
    case ErrorCode::PlacementInfeasible: return "PlacementInfeasible";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::PortKindMismatch: return "PortKindMismatch";
    case ErrorCode::DanglingEdge: return "DanglingEdge";
    case ErrorCode::MultipleProducers: return "MultipleProducers";
    case ErrorCode::NodeFailure: return "NodeFailure";
    case ErrorCode::EmptySubspace: return "EmptySubspace";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::AllocationExpired: return "AllocationExpired";
    case ErrorCode::Overrun: return "Overrun";
    case ErrorCode::CounterRegression: return "CounterRegression";
    case ErrorCode::InvalidName: return "InvalidName";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::RuntimeFailure: return "RuntimeFailure";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
      code_(code) {}

}  // namespace qcsc
