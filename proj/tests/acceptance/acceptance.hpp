#pragma once

// Acceptance suite: one entry per shipped criterion, each printing a single
// PASS/FAIL line plus the measured numbers it rests on.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace otfs_accept {

struct Criterion {
    int id;
    std::string title;
    std::function<bool(std::ostream&)> fn;
};

void register_core(std::vector<Criterion>& out);    // 1-5
void register_links(std::vector<Criterion>& out);   // 6, 11
void register_trends(std::vector<Criterion>& out);  // 7-10

int run(int only_criterion);  // 0 = all; returns number of failures

int default_workers();

}  // namespace otfs_accept
