# quarry - SPARQL UNION/OPTIONAL evaluation over an in-memory triple store
