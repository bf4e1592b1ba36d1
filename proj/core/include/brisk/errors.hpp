#pragma once

#include <stdexcept>
#include <string>

namespace brisk {

// Coarse failure categories; the CLI maps them onto stable exit codes
// (parse=2, domain=3, config=4, io=5).
enum class ErrorCategory { parse, domain, config, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), category_(cat) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

#define BRISK_DEFINE_ERROR(name, cat)                              \
  class name : public Error {                                      \
   public:                                                         \
    explicit name(const std::string& msg) : Error(cat, msg) {}     \
  }

BRISK_DEFINE_ERROR(SingularMatrix, ErrorCategory::domain);
BRISK_DEFINE_ERROR(DimensionMismatch, ErrorCategory::domain);
BRISK_DEFINE_ERROR(InvalidBarrier, ErrorCategory::domain);
BRISK_DEFINE_ERROR(DimensionTooLarge, ErrorCategory::domain);
BRISK_DEFINE_ERROR(NoFeasibleSet, ErrorCategory::domain);
BRISK_DEFINE_ERROR(RhoOutOfRange, ErrorCategory::domain);
BRISK_DEFINE_ERROR(NonPositiveLambda, ErrorCategory::domain);
BRISK_DEFINE_ERROR(DomainError, ErrorCategory::domain);
BRISK_DEFINE_ERROR(DegenerateBound, ErrorCategory::domain);
BRISK_DEFINE_ERROR(PartialIndexSet, ErrorCategory::domain);
BRISK_DEFINE_ERROR(HorizonTooLarge, ErrorCategory::domain);
BRISK_DEFINE_ERROR(InvalidScenario, ErrorCategory::domain);
BRISK_DEFINE_ERROR(BudgetTooSmall, ErrorCategory::config);
BRISK_DEFINE_ERROR(ScheduleInvalid, ErrorCategory::config);
BRISK_DEFINE_ERROR(SpanTooNarrow, ErrorCategory::config);
BRISK_DEFINE_ERROR(ParseError, ErrorCategory::parse);
BRISK_DEFINE_ERROR(IoError, ErrorCategory::io);

#undef BRISK_DEFINE_ERROR

}  // namespace brisk
