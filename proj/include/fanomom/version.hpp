#pragma once

#define FANOMOM_VERSION "1.0.0"

namespace fanomom {
inline const char* version() { return FANOMOM_VERSION; }
}
