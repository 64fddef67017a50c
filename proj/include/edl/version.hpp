#pragma once

#ifndef EDL_VERSION_STRING
#define EDL_VERSION_STRING "0.1.0"
#endif
