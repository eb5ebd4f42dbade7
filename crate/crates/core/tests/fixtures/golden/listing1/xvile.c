#include <errno.h>
#include "signal.h"

static void reap_child(int child, pid_t cpid)
{
    if (child < 0 && errno == EINTR) {
        kill(SIGKILL, cpid);
    }
}
