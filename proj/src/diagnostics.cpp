#include "ddmap/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace ddmap {
namespace {

thread_local std::vector<WarningCapture*> capture_stack;

std::mutex handler_mutex;

WarningHandler& global_handler() {
  static WarningHandler handler = [](std::string_view msg) {
    std::cerr << "ddmap warning: " << msg << '\n';
  };
  return handler;
}

}  // namespace

void warn(std::string message) {
  if (!capture_stack.empty()) {
    capture_stack.back()->messages_.push_back(std::move(message));
    return;
  }
  std::lock_guard lock(handler_mutex);
  if (global_handler()) global_handler()(message);
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(handler_mutex);
  std::swap(global_handler(), handler);
  return handler;
}

WarningCapture::WarningCapture() { capture_stack.push_back(this); }

WarningCapture::~WarningCapture() {
  // Captures are strictly nested on a thread.
  if (!capture_stack.empty() && capture_stack.back() == this) capture_stack.pop_back();
}

bool WarningCapture::contains(std::string_view fragment) const {
  for (const auto& m : messages_)
    if (m.find(fragment) != std::string::npos) return true;
  return false;
}

}  // namespace ddmap
