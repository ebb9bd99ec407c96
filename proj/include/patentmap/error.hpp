#pragma once

#include <stdexcept>
#include <string>

namespace patentmap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An IPC symbol that cannot be parsed.
class MalformedCode : public Error {
 public:
  using Error::Error;
};

/// A code was asked for a level deeper than the one it carries.
class LevelUnavailable : public Error {
 public:
  using Error::Error;
};

class UnreadableFile : public Error {
 public:
  using Error::Error;
};

class UnknownFormat : public Error {
 public:
  using Error::Error;
};

/// Ingestion produced zero valid records.
class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

class InvalidRange : public Error {
 public:
  using Error::Error;
};

class InvalidCounts : public Error {
 public:
  using Error::Error;
};

/// No node survived the occurrence filter.
class EmptyGraph : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  using Error::Error;
};

class PartitionMismatch : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

class MissingPositions : public Error {
 public:
  using Error::Error;
};

/// Invalid pipeline configuration, detected before any work is done.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace patentmap
