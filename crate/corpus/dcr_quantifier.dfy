datatype MyQuantifier = None | Some(x: set<int>) | All(y: set<int>)

method Main()
{
  var selection := Some({1, 2, 3, 4});
  print selection, "\n";
}
