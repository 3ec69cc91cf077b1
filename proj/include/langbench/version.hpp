#pragma once

#define LANGBENCH_VERSION "0.1.0"
