#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "singring/ensemble.hpp"

int main(int argc, char** argv) {
    singring::init_linear_algebra();
    return doctest::Context(argc, argv).run();
}
