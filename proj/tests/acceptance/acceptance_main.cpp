#include <cstdlib>
#include <iostream>
#include <string>

#include "levyqsd/verify.hpp"

int main(int argc, char** argv) {
    levyqsd::verify::VerifyOptions options;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--threads" && i + 1 < argc) {
            options.threads = static_cast<unsigned>(std::stoul(argv[++i]));
        } else if (arg == "--seed" && i + 1 < argc) {
            options.seed = std::stoull(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--threads N] [--seed S]\n";
            return 2;
        }
    }
    const auto results = levyqsd::verify::run_all(options);
    levyqsd::verify::print_report(std::cout, results);
    for (const auto& r : results) {
        if (!r.passed) return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
