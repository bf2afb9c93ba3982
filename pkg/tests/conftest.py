from dlpa.syntax import Test

# the Test AST node (program guard) is not a test case
Test.__test__ = False
