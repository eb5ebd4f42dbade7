typedef int libnet_ptag_t;
typedef unsigned char uint8_t;
typedef unsigned short uint16_t;
typedef unsigned int uint32_t;

libnet_ptag_t libnet_build_tcp(uint16_t sp, uint16_t dp, uint32_t seq, uint32_t ack,
    uint8_t control, uint16_t win, uint16_t sum, uint16_t urg, uint16_t len,
    const uint8_t *payload, uint32_t payload_s, libnet_t *l, libnet_ptag_t ptag);
