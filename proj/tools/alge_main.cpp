#include "alge/cli.hpp"

int main(int argc, char** argv) {
    return alge::cli::run({argv + 1, argv + argc});
}
