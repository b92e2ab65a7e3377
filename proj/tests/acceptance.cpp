// Acceptance gate: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion.  Exit status 0 only when the
// whole suite is green.

#include <filesystem>
#include <iostream>

#include "henonlab/validation.hpp"

int main(int argc, char** argv) {
    const std::filesystem::path work_dir = argc > 1 ? argv[1] : "acceptance_work";
    try {
        const auto results = henonlab::run_acceptance({work_dir});
        return henonlab::print_acceptance_report(results, std::cout) ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "acceptance suite aborted: " << e.what() << "\n";
        return 1;
    }
}
