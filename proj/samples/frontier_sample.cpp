// Trace a short frontier on a universe file and print it.
//
//   frontier_sample <portN file> [iterations]

#include <aro/frontier.hpp>
#include <aro/orlib.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: " << argv[0] << " <universe file> [iterations]\n";
        return 2;
    }
    const auto universe = aro::load_universe(argv[1]);
    const auto bounds = aro::Bounds::uniform(universe.size(), 0.01, 1.0);

    aro::AroParams params;
    params.t_max = argc > 2 ? std::atol(argv[2]) : 5000;

    const auto points = aro::trace_frontier(universe, 10, bounds, params, {.points = 11});
    std::cout << std::setw(8) << "lambda" << std::setw(14) << "return" << std::setw(14)
              << "stddev" << "  assets\n";
    for (const auto& pt : points) {
        std::cout << std::fixed << std::setprecision(3) << std::setw(8) << pt.lambda
                  << std::setprecision(6) << std::setw(14) << pt.expected_return
                  << std::setw(14) << pt.stddev << " ";
        for (int id : pt.portfolio.indices) {
            std::cout << ' ' << id;
        }
        std::cout << '\n';
    }
}
