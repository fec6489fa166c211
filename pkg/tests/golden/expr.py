def expr():
#line 8 "expr.chpl"
    a: int = 1 + 1
#line 9 "expr.chpl"
    a = a + 1
