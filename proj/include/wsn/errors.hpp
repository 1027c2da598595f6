#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wsn/types.hpp"

namespace wsn {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(NodeId id)
      : Error("unknown node " + std::to_string(id.value)), id_(id) {}
  NodeId id() const { return id_; }

 private:
  NodeId id_;
};

// A node lies outside every base-station cell.
class CoverageError : public Error {
 public:
  explicit CoverageError(std::vector<NodeId> uncovered);
  const std::vector<NodeId>& uncovered() const { return uncovered_; }

 private:
  std::vector<NodeId> uncovered_;
};

class LengthError : public Error {
 public:
  using Error::Error;
};

class NoSession : public Error {
 public:
  using Error::Error;
};

class AlreadyAuthenticated : public Error {
 public:
  using Error::Error;
};

class SelfVote : public Error {
 public:
  using Error::Error;
};

class VoterRevoked : public Error {
 public:
  using Error::Error;
};

// Config problems. `path` is the dotted field path ("trust.alarm_threshold").
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wsn
