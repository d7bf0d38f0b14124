#pragma once

#include <stdexcept>
#include <string>

namespace qcsc {

enum class ErrorCode {
  // topology
  DuplicateId,
  DanglingLink,
  IsolatedQpu,
  NoPath,
  // kernel
  TimestampInPast,
  HandlerFailure,
  // mock qpu
  ModelTooLarge,
  InvalidTheta,
  InvalidDistance,
  InvalidCircuit,
  // qrmi
  ResourceHeld,
  ResourceInaccessible,
  UnknownResource,
  UnknownToken,
  AlreadyReleased,
  TokenExpired,
  DeviceRejected,
  UnknownJob,
  NotDone,
  NotCancellable,
  // scheduler
  InvalidSpec,
  UnsatisfiableDemand,
  CouplingInfeasible,
  ResidencyViolation,
  // tcg
  PlacementInfeasible,
  CycleDetected,
  PortKindMismatch,
  DanglingEdge,
  MultipleProducers,
  NodeFailure,
  // workloads
  EmptySubspace,
  SingularMatrix,
  AllocationExpired,
  Overrun,
  // telemetry
  CounterRegression,
  InvalidName,
  EmptyWindow,
  // cli
  ParseError,
  ValidationError,
  RuntimeFailure,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace qcsc
