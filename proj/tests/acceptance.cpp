// Acceptance run: one PASS/FAIL line per criterion, then informational measurements.
// Exit status is nonzero when any criterion fails. With --expect-red 1,2,4 it is zero only when
// exactly the listed criteria fail, so a regression or an unexpected pass both show up.
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "maxlab/maxlab.hpp"

using namespace maxlab;

int main(int argc, char** argv) {
    std::string json_path;
    std::set<int> expect_red;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--json") == 0) json_path = argv[i + 1];
        if (std::strcmp(argv[i], "--expect-red") == 0) {
            std::stringstream ss(argv[i + 1]);
            for (std::string tok; std::getline(ss, tok, ',');) expect_red.insert(std::stoi(tok));
        }
    }

    Playbook pb;
    pb.on_progress([](const std::string& s) { std::cerr << "  .. " << s << std::endl; });
    const auto lines = pb.run_all([](const CriterionLine& c) {
        std::cout << criterion_text(c) << "  (" << detail::strf("%.1f", c.seconds) << " s)" << std::endl;
    });
    const auto info = pb.informational();
    for (const auto& l : info) std::cout << "  info: " << l.name << ": " << l.text << std::endl;

    int failed = 0;
    std::set<int> red;
    for (const auto& c : lines)
        if (!c.pass) {
            ++failed;
            red.insert(c.id);
        }
    std::cout << "acceptance: " << lines.size() - std::size_t(failed) << "/" << lines.size() << " criteria pass"
              << std::endl;

    if (!json_path.empty()) {
        json j;
        json arr = json::array();
        for (const auto& c : lines) arr.push_back(criterion_json(c));
        j["criteria"] = arr;
        json inf = json::array();
        for (const auto& l : info) inf.push_back({{"name", l.name}, {"value", l.text}});
        j["informational"] = inf;
        std::ofstream(json_path) << j.dump(2) << "\n";
    }
    if (!expect_red.empty()) {
        for (const auto& c : lines) {
            if (!c.pass && !expect_red.count(c.id)) std::cout << "unexpected FAIL: criterion " << c.id << std::endl;
            if (c.pass && expect_red.count(c.id)) std::cout << "unexpected PASS: criterion " << c.id << std::endl;
        }
        return red == expect_red ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
