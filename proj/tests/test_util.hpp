#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qakin/common.hpp"

namespace qakin_test {

/// Collects library warnings for the lifetime of the object.
class WarningCapture {
public:
    WarningCapture() {
        messages_ = std::make_shared<std::vector<std::string>>();
        auto sink = messages_;
        qakin::set_warning_handler([sink](const std::string& m) { sink->push_back(m); });
    }
    ~WarningCapture() { qakin::set_warning_handler(nullptr); }

    std::size_t count() const { return messages_->size(); }
    bool any_contains(const std::string& needle) const {
        for (const auto& m : *messages_)
            if (m.find(needle) != std::string::npos) return true;
        return false;
    }

private:
    std::shared_ptr<std::vector<std::string>> messages_;
};

}  // namespace qakin_test
