/**
 * @file cli_impl.hpp
 * @brief CLI entry point (placeholder while the library layers are built).
 */
#pragma once

namespace qmds {

inline int cli_main(int, char**) { return 2; }

}  // namespace qmds
