// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace collabcipher {

/// Decodes UTF-8 into scalar values. Throws IntegrityError with the character
/// index of the first malformed sequence (overlong forms and surrogates are
/// rejected).
std::u32string utf8_decode(std::string_view bytes);

std::string utf8_encode(std::u32string_view chars);

void utf8_append(std::string& out, char32_t cp);

}  // namespace collabcipher
