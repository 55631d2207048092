#include "satqkd/error.hpp"

#include <iostream>

namespace satqkd {

namespace {
WarningHandler& handler() {
    static WarningHandler h;
    return h;
}
}  // namespace

void set_warning_handler(WarningHandler h) { handler() = std::move(h); }

void warn(const std::string& message) {
    if (const auto& h = handler()) {
        h(message);
        return;
    }
    std::cerr << "warning: " << message << '\n';
}

}  // namespace satqkd
