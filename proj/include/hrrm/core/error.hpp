#pragma once

#include <stdexcept>
#include <string>

#include "hrrm/core/ids.hpp"

namespace hrrm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverlapError : public Error {
 public:
  explicit OverlapError(int prb)
      : Error("PRB " + std::to_string(prb) + " already granted"), prb_(prb) {}
  int prb() const noexcept { return prb_; }

 private:
  int prb_;
};

class OutOfRangeError : public Error {
 public:
  explicit OutOfRangeError(int prb)
      : Error("PRB " + std::to_string(prb) + " outside the carrier grid"), prb_(prb) {}
  int prb() const noexcept { return prb_; }

 private:
  int prb_;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class UnknownKindError : public Error {
 public:
  explicit UnknownKindError(const std::string& kind)
      : Error("unknown measurement kind '" + kind + "'"), kind_(kind) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class DuplicateIdError : public Error {
 public:
  explicit DuplicateIdError(const std::string& id)
      : Error("duplicate id '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class InvalidRecordError : public Error {
 public:
  using Error::Error;
};

class InsufficientResourcesError : public Error {
 public:
  InsufficientResourcesError(int total, int required)
      : Error("insufficient resources: " + std::to_string(total) + " PRBs, " +
              std::to_string(required) + " required by guarantees"),
        total_(total),
        required_(required) {}
  int total() const noexcept { return total_; }
  int required() const noexcept { return required_; }

 private:
  int total_;
  int required_;
};

class ReconfigRequiredError : public Error {
 public:
  explicit ReconfigRequiredError(FlowId flow)
      : Error("semi-persistent reservation of flow " + to_string(flow) +
              " no longer fits its partition"),
        flow_(flow) {}
  FlowId flow() const noexcept { return flow_; }

 private:
  FlowId flow_;
};

class ModeArityError : public Error {
 public:
  using Error::Error;
};

class NoLegsError : public Error {
 public:
  using Error::Error;
};

class UndeclaredActionError : public Error {
 public:
  UndeclaredActionError(const std::string& feature, const std::string& action)
      : Error("feature '" + feature + "' emitted undeclared action '" + action + "'"),
        feature_(feature) {}
  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

class UnrankedFeatureError : public Error {
 public:
  explicit UnrankedFeatureError(const std::string& feature)
      : Error("feature '" + feature + "' is missing from the strategy ranking") {}
};

/// Configuration failure tied to a location in the scenario tree.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, std::string reason)
      : Error(path + ": " + reason), path_(std::move(path)), reason_(std::move(reason)) {}
  const std::string& path() const noexcept { return path_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& what)
      : Error(location + ": " + what), location_(std::move(location)) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace hrrm
