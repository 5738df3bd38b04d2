#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "lingstat/log.hpp"

int main(int argc, char** argv) {
  lingstat::log::set_level(lingstat::log::Level::quiet);
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
