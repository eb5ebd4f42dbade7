typedef struct _GdkPixbuf GdkPixbuf;
typedef int gboolean;

GdkPixbuf* gdk_pixbuf_new (GdkColorspace colorspace, gboolean has_alpha, int bits_per_sample, int width, int height);
