#include "gdk-pixbuf.h"

GdkPixbuf *
panel_background_prepare (PanelBackground *background, int width, int height)
{
    GdkPixbuf *r = NULL;

    if (background->rotate_image && background->orientation == VERTICAL) {
        int sx = 0;
        int sy = 0;
        int bw = background->width;
        int bh = background->height;

        if (bw > 0 && bh > 0) {
            sx = bw / 2;
            sy = bh / 2;
            r = gdk_pixbuf_new (GDK_COLORSPACE_RGB, FALSE, 8, height, width);
        }
    }
    return r;
}
