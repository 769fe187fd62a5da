method Sum(x: int, y: int) returns (r: int)
{
  r := x + y;
}

method Multiply(x: int, y: int) returns (r: int)
{
  r := x * y;
}

method Main()
{
  var n := Sum(10, 20);
  print n, "\n";
}
