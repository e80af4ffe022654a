#include "sparkdet/error.hpp"

namespace sparkdet {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::sort_mismatch: return "SortMismatch";
    case Errc::operator_failure: return "OperatorError";
    case Errc::empty_partition: return "EmptyPartition";
    case Errc::empty_rdd: return "EmptyRdd";
    case Errc::empty_list: return "EmptyList";
    case Errc::invalid_plan: return "InvalidPlan";
    case Errc::unknown_operator: return "UnknownOperator";
    case Errc::dangling_edge: return "DanglingEdge";
    case Errc::encoding_violation: return "EncodingViolation";
    case Errc::parse_error: return "ParseError";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Error";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(render(code, message, std::nullopt, std::nullopt)),
      code_(code),
      detail_(message) {}

Error Error::at(std::optional<std::size_t> partition, std::optional<std::size_t> element) const {
  Error copy = *this;
  if (!copy.partition_) copy.partition_ = partition;
  if (!copy.element_) copy.element_ = element;
  static_cast<std::runtime_error&>(copy) =
      std::runtime_error(render(code_, detail_, copy.partition_, copy.element_));
  return copy;
}

std::string Error::render(Errc code, const std::string& detail,
                          std::optional<std::size_t> partition,
                          std::optional<std::size_t> element) {
  std::string out{to_string(code)};
  out += ": ";
  out += detail;
  if (partition) out += " (partition " + std::to_string(*partition);
  if (element) out += (partition ? ", element " : " (element ") + std::to_string(*element);
  if (partition || element) out += ")";
  return out;
}

}  // namespace sparkdet
