# Catalog schema migrations, applied in filename order by `gfflab catalog migrate`
# and whenever a run is recorded.
