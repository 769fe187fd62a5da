method Circle(radius: real) returns (p: real, s: real)
  requires radius >= 0.0
{
  var perimeter := 2.0 * radius * 3.14;
  var area := radius * radius * 3.14;
  p := perimeter;
  s := area;
}
