#include "ccsim/harness.hpp"

#include <cstdlib>
#include <ostream>
#include <thread>

namespace ccsim::harness {

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

std::pair<std::string, std::string> rat_cells(const Rat& value) {
    return {rat_to_decimal(value, 12), rat_to_fraction(value)};
}

int worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    int workers = hw ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("CCSIM_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1) workers = std::min(workers, cap);
        } catch (const std::exception&) {
            // ignore malformed values; default stands
        }
    }
    return workers;
}

} // namespace ccsim::harness
