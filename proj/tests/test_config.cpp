#include <doctest.h>
// placeholder
