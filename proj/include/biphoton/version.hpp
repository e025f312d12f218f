#ifndef BIPHOTON_VERSION_HPP
#define BIPHOTON_VERSION_HPP

#define BIPHOTON_VERSION_MAJOR 0
#define BIPHOTON_VERSION_MINOR 1
#define BIPHOTON_VERSION_PATCH 0
#define BIPHOTON_VERSION_STRING "0.1.0"

namespace biphoton {

inline const char* version() { return BIPHOTON_VERSION_STRING; }

}

#endif
