#include "kleincert/kleincert.hpp"

int main(int argc, char** argv) { return kleincert::dispatch(argc, argv); }
