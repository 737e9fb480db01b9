#pragma once

#include <stdexcept>
#include <string>

namespace ccsim {

// Thrown when a user cannot reconstruct its requested file from its cache
// plus the broadcast log. Carries the first missing piece for diagnostics.
class DecodeError : public std::runtime_error {
public:
    DecodeError(std::string what, std::string missing_piece)
        : std::runtime_error(std::move(what)), missing(std::move(missing_piece)) {}
    std::string missing;
};

// A scheme was asked to run at a memory point whose subdivision parameter is
// not integral; the caller should go through the memory-sharing entry point.
class RequiresMemorySharing : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class InsufficientShares : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class NoValidPartition : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class AmbiguousPartition : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class DegenerateColoring : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ccsim
