#include "Xlib.h"

static int xinput_opcode;
static int xinput_event_base;
static int xinput_error_base;

static void
gpaste_keybinder_init_xinput (Display *display)
{
    if (XQueryExtension (display, "XInputExtension", &xinput_opcode, &xinput_error_base, &xinput_event_base)) { /* ... */
        gpaste_keybinder_select_events (display);
    }
}
