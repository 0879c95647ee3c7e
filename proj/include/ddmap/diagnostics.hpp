#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ddmap {

using WarningHandler = std::function<void(std::string_view)>;

/// Reports a non-fatal condition. Routed to the innermost WarningCapture on
/// the calling thread, otherwise to the process-wide handler (stderr by
/// default).
void warn(std::string message);

/// Replaces the process-wide handler; returns the previous one.
WarningHandler set_warning_handler(WarningHandler handler);

/// Collects warnings raised on the current thread for its lifetime.
class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(std::string_view fragment) const;

 private:
  friend void warn(std::string message);
  std::vector<std::string> messages_;
};

}  // namespace ddmap
