#include "graph.h"

void cleanGraph(Graph *graph, double maxCoverageCutoff, long minContigKmerLength,
                boolean flagExportFilteredNodes, double weight)
{
    removeHighCoverageNodes(graph, maxCoverageCutoff, (Coordinate)minContigKmerLength, flagExportFilteredNodes, weight);
}
