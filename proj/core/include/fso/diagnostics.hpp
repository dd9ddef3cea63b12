#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

namespace fso::diagnostics {

using WarningHandler = std::function<void(std::string_view)>;

// Installs a handler for library warnings and returns the previous one. The
// default handler writes the first warning of each kind to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

// Oblique-density evaluated outside its far-field validity region.
void warn_near_field();
std::uint64_t near_field_warning_count() noexcept;

}  // namespace fso::diagnostics
