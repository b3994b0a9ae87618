#pragma once

#define QCFD_VERSION "0.1.0"
