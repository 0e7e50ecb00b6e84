#include "qakin/common.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace qakin {

namespace {
std::mutex handler_mutex;
warning_handler handler;  // empty -> stderr
}  // namespace

void set_warning_handler(warning_handler h) {
    std::lock_guard<std::mutex> lock(handler_mutex);
    handler = std::move(h);
}

void warn(const std::string& message) {
    std::lock_guard<std::mutex> lock(handler_mutex);
    if (handler) {
        handler(message);
    } else {
        std::cerr << "[qakin warning] " << message << "\n";
    }
}

}  // namespace qakin
