#include <iostream>

#include "tridge_app/app.hpp"

int main(int argc, char** argv) {
    return tridge::app::run(argc, argv, std::cout, std::cerr);
}
