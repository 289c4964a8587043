#pragma once

#ifndef QMIM_VERSION_STRING
#define QMIM_VERSION_STRING "0.1.0"
#endif

namespace qmim {
inline constexpr const char* kVersion = QMIM_VERSION_STRING;
}
