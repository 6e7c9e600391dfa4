#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <iostream>
#include <thread>

namespace otfs_accept {

int default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 2;
}

int run(int only_criterion) {
    std::vector<Criterion> all;
    register_core(all);
    register_links(all);
    register_trends(all);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

    int failures = 0, executed = 0;
    for (const auto& c : all) {
        if (only_criterion != 0 && c.id != only_criterion) continue;
        ++executed;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.fn(std::cout);
        } catch (const std::exception& e) {
            std::cout << "  exception: " << e.what() << '\n';
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.title << " ("
                  << secs << " s)" << std::endl;
        if (!ok) ++failures;
    }
    if (executed == 0) {
        std::cerr << "no such criterion\n";
        return 2;
    }
    return failures;
}

}  // namespace otfs_accept

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc; ++i)
        if (!std::strcmp(argv[i], "--criterion")) only = std::atoi(argv[i + 1]);
    return otfs_accept::run(only);
}
