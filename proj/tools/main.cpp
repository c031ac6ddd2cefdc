#include "singring/ensemble.hpp"
int main() { singring::init_linear_algebra(); return 0; }
