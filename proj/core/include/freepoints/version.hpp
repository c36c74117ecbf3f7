#pragma once

#include <string_view>

namespace freepoints {

std::string_view Version();

}  // namespace freepoints
