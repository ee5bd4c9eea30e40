#include <doctest.h>

TEST_SUITE_BEGIN("weiss");
TEST_SUITE_END();
