#pragma once

#include <stdexcept>
#include <string>

namespace pogorelov
{

// Argument outside the domain on which an operation is defined.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

// Sampling or fitting configuration that cannot produce a result.
class ConfigurationError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// A computed quantity contradicts a property guaranteed by construction.
class InternalConsistencyError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

class SingularEvaluationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Input fails a hypothesis of the lemma it is fed to; what() names it.
class RejectedInputError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

class GeneratorExhaustedError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace pogorelov
